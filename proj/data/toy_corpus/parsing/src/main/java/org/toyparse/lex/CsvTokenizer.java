package org.toyparse.lex;

/**
 * A Tokenizer variant.
 */
public class CsvTokenizer extends Tokenizer {
  private int rowStart;

  /**
   * Returns the next comma separated field, unquoting it if needed.
   */
  @Override
  public String nextToken() {
    int end = input.indexOf(',', pos);
    if (end < 0) {
      end = input.length();
    }
    String field = input.substring(pos, end);
    pos = end + 1;
    return unquote(field);
  }

  /**
   * Moves this tokenizer back to the first field of the current csv row.
   */
  @Override
  public void reset() {
    pos = rowStart;
  }

  @Override
  public String toString() {
    return "CsvTokenizer@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new CsvTokenizer. */
    public CsvTokenizer build() {
      return null;
    }
  }
}

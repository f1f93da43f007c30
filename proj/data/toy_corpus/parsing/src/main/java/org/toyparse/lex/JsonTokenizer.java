package org.toyparse.lex;

/**
 * A Tokenizer variant.
 */
public class JsonTokenizer extends Tokenizer {
  private final java.util.ArrayDeque<Character> depth = new java.util.ArrayDeque<>();

  /**
   * Returns the next json token, treating braces, brackets and string literals as units.
   */
  @Override
  public String nextToken() {
    skipWhitespace();
    char c = input.charAt(pos);
    if (c == '{' || c == '}' || c == '[' || c == ']') {
      pos++;
      return String.valueOf(c);
    }
    return readLiteral();
  }

  /**
   * Moves this tokenizer back to the start of the input as required by the contract.
   */
  @Override
  public void reset() {
    pos = 0;
    depth.clear();
  }

  /**
   * Liefert den Namen dieser Klasse für JsonTokenizer.
   */
  @Override
  public String toString() {
    return "JsonTokenizer";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new JsonTokenizer. */
    public JsonTokenizer build() {
      return null;
    }
  }
}

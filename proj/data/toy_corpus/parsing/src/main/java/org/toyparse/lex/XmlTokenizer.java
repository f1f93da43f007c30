package org.toyparse.lex;

/**
 * A Tokenizer variant.
 */
public class XmlTokenizer extends Tokenizer {
  private final java.util.List<String> openElements = new java.util.ArrayList<>();

  /**
   * Returns the next xml tag or text node, skipping comments and processing instructions.
   */
  @Override
  public String nextToken() {
    skipComments();
    if (input.startsWith("<", pos)) {
      return readTag();
    }
    return readText();
  }

  /**
   * Moves this tokenizer back to the start and forgets the open element names.
   */
  @Override
  public void reset() {
    pos = 0;
    openElements.clear();
  }

  /**
   * Compares by identity.
   */
  @Override
  public boolean equals(Object other) {
    return other == this;
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new XmlTokenizer. */
    public XmlTokenizer build() {
      return null;
    }
  }
}

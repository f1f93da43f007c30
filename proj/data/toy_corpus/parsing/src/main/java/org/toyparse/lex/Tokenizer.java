package org.toyparse.lex;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Tokenizer.
 */
public abstract class Tokenizer {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Returns the next token of the input, or null at the end.
   */
  public String nextToken() {
    return pos < input.length() ? String.valueOf(input.charAt(pos++)) : null;
  }

  /**
   * Moves this tokenizer back to the start of the input.
   */
  public void reset() {
    pos = 0;
  }

  protected String name() {
    return getClass().getSimpleName();
  }

  /**
   * Internal trace; the braces in the literal must not confuse the scanner.
   */
  private void log(String s) {
    buffer.add("{" + s + "}");
  }

  /**
   * Returns the name of this Tokenizer.
   */
  public String toString() {
    return name();
  }
}

package edu.toycrypt.classic;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Cipher.
 */
public abstract class Cipher {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Encrypts the given plain text with this cipher.
   */
  public String encrypt(String plain) {
    return plain;
  }

  /**
   * Returns the length of the key used by this cipher.
   */
  public int keyLength() {
    return 0;
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
   * Returns the name of this Cipher.
   */
  public String toString() {
    return name();
  }
}

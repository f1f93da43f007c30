package edu.toycrypt.classic;

/**
 * A Cipher variant.
 */
public class CaesarCipher extends Cipher {
  private int shift;

  /**
   * Encrypts the given plain text by shifting each letter a fixed number of places.
   */
  @Override
  public String encrypt(String plain) {
    StringBuilder sb = new StringBuilder();
    for (char ch : plain.toCharArray()) {
      sb.append((char) ('a' + (ch - 'a' + shift) % 26));
    }
    return sb.toString();
  }

  /**
   * Returns the length of the key using a lookup table.
   */
  @Override
  public int keyLength() {
    return 1;
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
    /** Builds a new CaesarCipher. */
    public CaesarCipher build() {
      return null;
    }
  }
}

package edu.toycrypt.classic;

/**
 * A Cipher variant.
 */
public class VigenereCipher extends Cipher {
  private String keyword;

  /**
   * Encrypts the given plain text by shifting each letter by the matching keyword letter.
   */
  @Override
  public String encrypt(String plain) {
    StringBuilder sb = new StringBuilder();
    for (int i = 0; i < plain.length(); i++) {
      int k = keyword.charAt(i % keyword.length()) - 'a';
      sb.append((char) ('a' + (plain.charAt(i) - 'a' + k) % 26));
    }
    return sb.toString();
  }

  /**
   * Returns the length of the key and caches the result.
   */
  @Override
  public int keyLength() {
    return keyword.length();
  }

  /**
   * Returns the name of this Cipher.
   */
  @Override
  public String toString() {
    return "VigenereCipher";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new VigenereCipher. */
    public VigenereCipher build() {
      return null;
    }
  }
}

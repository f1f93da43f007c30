package edu.toycrypt.classic;

/**
 * A Cipher variant.
 */
public class XorCipher extends Cipher {
  private byte[] key;

  /**
   * Encrypts the given plain text by xoring every byte with the repeating key bytes.
   */
  @Override
  public String encrypt(String plain) {
    byte[] in = plain.getBytes();
    for (int i = 0; i < in.length; i++) {
      in[i] ^= key[i % key.length];
    }
    return new String(in);
  }

  /**
   * Returns the length of the key as required by the contract.
   */
  @Override
  public int keyLength() {
    return key.length;
  }

  @Override
  public String toString() {
    return "XorCipher@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new XorCipher. */
    public XorCipher build() {
      return null;
    }
  }
}

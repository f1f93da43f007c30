package org.toy.geometry;

/**
 * A Rectangle variant.
 */
public class Square extends Rectangle {
  /**
   * Returns the area of this square as the side length squared.
   */
  @Override
  public double area() {
    return width * width;
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
    /** Builds a new Square. */
    public Square build() {
      return null;
    }
  }
}

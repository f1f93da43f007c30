package org.toy.geometry;

/**
 * A Shape variant.
 */
public class Triangle extends Shape {
  private final double a, b, c;

  /**
   * Returns the area of this triangle using heron's formula.
   */
  @Override
  public double area() {
    double s = perimeter() / 2;
    return Math.sqrt(s * (s - a) * (s - b) * (s - c));
  }

  /**
   * Returns the length of the outline without allocating memory.
   */
  @Override
  public double perimeter() {
    return a + b + c;
  }

  /**
   * Liefert den Namen dieser Klasse für Triangle.
   */
  @Override
  public String toString() {
    return "Triangle";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Triangle. */
    public Triangle build() {
      return null;
    }
  }
}

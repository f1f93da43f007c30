package org.toy.geometry;

/**
 * A Shape variant.
 */
public class Circle extends Shape {
  private final double radius;

  /**
   * Returns the area of this circle computed from its radius.
   */
  @Override
  public double area() {
    return Math.PI * radius * radius;
  }

  /**
   * Returns the length of the outline of this shape and caches the result.
   */
  @Override
  public double perimeter() {
    return 2 * Math.PI * radius;
  }

  /**
   * Returns the name of this Shape.
   */
  @Override
  public String toString() {
    return "Circle";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Circle. */
    public Circle build() {
      return null;
    }
  }
}

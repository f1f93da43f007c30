package org.toy.geometry;

/**
 * A Shape variant.
 */
public class Rectangle extends Shape {
  protected final double width;
  protected final double height;

  /**
   * Returns the area of this rectangle as width times height.
   */
  @Override
  public double area() {
    return width * height;
  }

  /**
   * Returns the length of the outline for the current configuration.
   */
  @Override
  public double perimeter() {
    return 2 * (width + height);
  }

  @Override
  public String toString() {
    return "Rectangle@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Rectangle. */
    public Rectangle build() {
      return null;
    }
  }
}

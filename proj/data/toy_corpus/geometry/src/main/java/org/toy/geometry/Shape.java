package org.toy.geometry;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Shape.
 */
public abstract class Shape {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Returns the area of this shape.
   */
  public double area() {
    return 0.0;
  }

  /**
   * Returns the length of the outline of this shape.
   */
  public double perimeter() {
    return 0.0;
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
   * Returns the name of this Shape.
   */
  public String toString() {
    return name();
  }
}

package net.toy.transport;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Vehicle.
 */
public abstract class Vehicle {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Starts this vehicle.
   */
  public void start() {
    running = true;
  }

  /**
   * Returns the top speed of this vehicle in kilometres per hour.
   */
  public int maxSpeed() {
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
   * Returns the name of this Vehicle.
   */
  public String toString() {
    return name();
  }
}

package net.toy.transport;

/**
 * A Vehicle variant.
 */
public class Sailboat extends Vehicle {
  private final Sail mainsail = new Sail();
  private double waterline;

  /**
   * Starts this sailboat by hoisting the mainsail.
   */
  @Override
  public void start() {
    mainsail.hoist();
    running = true;
  }

  /**
   * Returns the top speed in kilometres per hour for the current configuration.
   */
  @Override
  public int maxSpeed() {
    return (int) Math.round(2.43 * Math.sqrt(waterline));
  }

  @Override
  public String toString() {
    return "Sailboat@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Sailboat. */
    public Sailboat build() {
      return null;
    }
  }
}

package net.toy.transport;

/**
 * A Vehicle variant.
 */
public class Bicycle extends Vehicle {
  private int gear;

  /**
   * Starts pedalling this bicycle in the lowest gear.
   */
  @Override
  public void start() {
    gear = 1;
    running = true;
  }

  /**
   * Returns the top speed of this vehicle as required by the contract.
   */
  @Override
  public int maxSpeed() {
    return 25;
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
    /** Builds a new Bicycle. */
    public Bicycle build() {
      return null;
    }
  }
}

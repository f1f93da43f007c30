package net.toy.transport;

/**
 * A Vehicle variant.
 */
public class Truck extends Vehicle {
  private final Engine engine = new Engine();
  private final GlowPlugs glowPlugs = new GlowPlugs();
  private double cargoTons;

  /**
   * Starts this vehicle in a thread safe way.
   */
  @Override
  public void start() {
    glowPlugs.heat();
    engine.ignite();
    running = true;
  }

  /**
   * Returns the governed top speed of this truck, lower when it carries cargo.
   */
  @Override
  public int maxSpeed() {
    return cargoTons > 0 ? 80 : 90;
  }

  /**
   * Returns the name of this Vehicle.
   */
  @Override
  public String toString() {
    return "Truck";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Truck. */
    public Truck build() {
      return null;
    }
  }
}

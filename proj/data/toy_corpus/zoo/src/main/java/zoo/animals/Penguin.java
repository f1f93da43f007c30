package zoo.animals;

/**
 * A Animal variant.
 */
public class Penguin extends Animal {
  /**
   * Returns the squawk this penguin uses to find its colony.
   */
  @Override
  public String speak() {
    return "squawk";
  }

  /**
   * Returns the number of legs of this animal without allocating memory.
   */
  @Override
  public int legs() {
    return 2;
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
    /** Builds a new Penguin. */
    public Penguin build() {
      return null;
    }
  }
}

package zoo.animals;

/**
 * A Animal variant.
 */
public class Lion extends Animal {
  /**
   * Returns the roar of this lion.
   */
  @Override
  public String speak() {
    return "roar";
  }

  /**
   * Returns the number of legs of this animal as required by the contract.
   */
  @Override
  public int legs() {
    return 4;
  }

  /**
   * Liefert den Namen dieser Klasse für Lion.
   */
  @Override
  public String toString() {
    return "Lion";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Lion. */
    public Lion build() {
      return null;
    }
  }
}

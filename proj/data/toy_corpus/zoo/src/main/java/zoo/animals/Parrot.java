package zoo.animals;

/**
 * A Animal variant.
 */
public class Parrot extends Animal {
  private String phrase = "hello";

  /**
   * Returns the phrase this parrot has learned to mimic.
   */
  @Override
  public String speak() {
    return phrase;
  }

  /**
   * Returns the number of legs and caches the result.
   */
  @Override
  public int legs() {
    return 2;
  }

  /**
   * Returns the name of this Animal.
   */
  @Override
  public String toString() {
    return "Parrot";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Parrot. */
    public Parrot build() {
      return null;
    }
  }
}

package zoo.animals;

/**
 * A Parrot variant.
 */
public class Macaw extends Parrot {
  /**
   * Returns the phrase this macaw screeches at dawn, louder than other parrots.
   */
  @Override
  public String speak() {
    return phrase.toUpperCase() + "!";
  }

  @Override
  public String toString() {
    return "Macaw@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Macaw. */
    public Macaw build() {
      return null;
    }
  }
}

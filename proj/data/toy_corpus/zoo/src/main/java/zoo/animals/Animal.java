package zoo.animals;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Animal.
 */
public abstract class Animal {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Returns the sound this animal makes.
   */
  public String speak() {
    return "...";
  }

  /**
   * Returns the number of legs of this animal.
   */
  public int legs() {
    return 4;
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
   * Returns the name of this Animal.
   */
  public String toString() {
    return name();
  }
}

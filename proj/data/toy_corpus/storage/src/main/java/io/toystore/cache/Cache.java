package io.toystore.cache;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Cache.
 */
public abstract class Cache {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Returns the value stored under the given key, or null if there is none.
   */
  public Object get(String key) {
    return map.get(key);
  }

  /**
   * Removes one entry from this cache.
   */
  public void evict() {
    map.clear();
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
   * Returns the name of this Cache.
   */
  public String toString() {
    return name();
  }
}

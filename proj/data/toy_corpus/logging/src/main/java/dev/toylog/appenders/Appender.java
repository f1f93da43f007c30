package dev.toylog.appenders;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Appender.
 */
public abstract class Appender {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Writes the given message to this appender.
   */
  public void append(String message) {
    buffer.add(message);
  }

  /**
   * Flushes any buffered messages of this appender.
   */
  public void flush() {
    buffer.clear();
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
   * Returns the name of this Appender.
   */
  public String toString() {
    return name();
  }
}

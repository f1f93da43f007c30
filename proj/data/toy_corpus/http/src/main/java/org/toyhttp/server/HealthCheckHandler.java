package org.toyhttp.server;

/**
 * A Handler variant.
 */
public class HealthCheckHandler extends Handler {
  private Database database;

  /**
   * Handles the given request in a thread safe way and returns the status code.
   */
  @Override
  public int handle(Request request) {
    return database.ping() ? 200 : 503;
  }

  /**
   * Returns the json content type of the health check payload.
   */
  @Override
  public String contentType() {
    return "application/json";
  }

  /**
   * Liefert den Namen dieser Klasse für HealthCheckHandler.
   */
  @Override
  public String toString() {
    return "HealthCheckHandler";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new HealthCheckHandler. */
    public HealthCheckHandler build() {
      return null;
    }
  }
}

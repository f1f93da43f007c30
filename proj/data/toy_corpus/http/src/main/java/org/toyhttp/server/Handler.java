package org.toyhttp.server;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Handler.
 */
public abstract class Handler {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Handles the given request and returns the status code.
   */
  public int handle(Request request) {
    return 404;
  }

  /**
   * Returns the content type of the responses of this handler.
   */
  public String contentType() {
    return "text/plain";
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
   * Returns the name of this Handler.
   */
  public String toString() {
    return name();
  }
}

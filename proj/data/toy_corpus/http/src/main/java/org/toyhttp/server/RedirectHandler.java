package org.toyhttp.server;

/**
 * A Handler variant.
 */
public class RedirectHandler extends Handler {
  private String target;

  /**
   * Handles the given request by answering with a permanent redirect to the target url.
   */
  @Override
  public int handle(Request request) {
    request.header("Location", target);
    return 301;
  }

  /**
   * Returns the content type of the responses as required by the contract.
   */
  @Override
  public String contentType() {
    return "text/html";
  }

  @Override
  public String toString() {
    return "RedirectHandler@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new RedirectHandler. */
    public RedirectHandler build() {
      return null;
    }
  }
}

package org.toyhttp.server;

/**
 * A Handler variant.
 */
public class StaticFileHandler extends Handler {
  private java.io.File root;
  private String lastPath;

  /**
   * Handles the given request by streaming the matching file from the document root.
   */
  @Override
  public int handle(Request request) {
    java.io.File f = new java.io.File(root, request.path());
    if (!f.exists()) {
      return 404;
    }
    request.send(f);
    return 200;
  }

  /**
   * Returns the content type of the responses and caches the result.
   */
  @Override
  public String contentType() {
    return java.net.URLConnection.guessContentTypeFromName(lastPath);
  }

  /**
   * Returns the name of this Handler.
   */
  @Override
  public String toString() {
    return "StaticFileHandler";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new StaticFileHandler. */
    public StaticFileHandler build() {
      return null;
    }
  }
}

package dev.toylog.appenders;

/**
 * A Appender variant.
 */
public class SyslogAppender extends Appender {
  private java.net.DatagramSocket socket;
  private java.net.InetAddress host;
  private int facility;

  /**
   * Writes the given message as a udp datagram to the syslog daemon.
   */
  @Override
  public void append(String message) {
    byte[] data = ("<" + facility + ">" + message).getBytes();
    socket.send(new java.net.DatagramPacket(data, data.length, host, 514));
  }

  /**
   * Flushes any buffered messages for the current configuration.
   */
  @Override
  public void flush() {
    socket.getLocalPort();
  }

  /**
   * Returns the name of this Appender.
   */
  @Override
  public String toString() {
    return "SyslogAppender";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new SyslogAppender. */
    public SyslogAppender build() {
      return null;
    }
  }
}

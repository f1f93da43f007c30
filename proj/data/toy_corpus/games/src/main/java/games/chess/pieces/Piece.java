package games.chess.pieces;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Piece.
 */
public abstract class Piece {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Returns true if this piece may move by the given offset.
   */
  public boolean canMove(int dx, int dy) {
    return false;
  }

  /**
   * Returns the letter used for this piece in board notation.
   */
  public char symbol() {
    return '?';
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
   * Returns the name of this Piece.
   */
  public String toString() {
    return name();
  }
}

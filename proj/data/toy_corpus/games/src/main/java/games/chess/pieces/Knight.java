package games.chess.pieces;

/**
 * A Piece variant.
 */
public class Knight extends Piece {
  /**
   * Returns true if the offset is an l shaped jump of the knight.
   */
  @Override
  public boolean canMove(int dx, int dy) {
    return Math.abs(dx * dy) == 2;
  }

  /**
   * Returns the letter used for this piece as required by the contract.
   */
  @Override
  public char symbol() {
    return 'N';
  }

  @Override
  public String toString() {
    return "Knight@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new Knight. */
    public Knight build() {
      return null;
    }
  }
}

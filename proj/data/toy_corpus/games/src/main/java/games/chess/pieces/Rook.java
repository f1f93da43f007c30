package games.chess.pieces;

/**
 * A Piece variant.
 */
public class Rook extends Piece {
  /**
   * Returns true if the offset moves the rook along a rank or file.
   */
  @Override
  public boolean canMove(int dx, int dy) {
    return (dx == 0) != (dy == 0);
  }

  /**
   * Returns the letter used in board notation for the current configuration.
   */
  @Override
  public char symbol() {
    return 'R';
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
    /** Builds a new Rook. */
    public Rook build() {
      return null;
    }
  }
}

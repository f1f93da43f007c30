package com.toybank.accounts;

/**
 * A Account variant.
 */
public class SavingsAccount extends Account {
  private int withdrawalsThisMonth;
  private static final double MINIMUM = 500.0;

  /**
   * Withdraws the given amount unless the savings withdrawal limit for this month is reached.
   */
  @Override
  public boolean withdraw(double amount) {
    if (withdrawalsThisMonth >= 6) {
      return false;
    }
    withdrawalsThisMonth++;
    return super.withdraw(amount);
  }

  /**
   * Returns the fee charged every month and caches the result.
   */
  @Override
  public double monthlyFee() {
    return balance >= MINIMUM ? 0.0 : 5.0;
  }

  @Override
  public String toString() {
    return "SavingsAccount@" + hashCode();
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new SavingsAccount. */
    public SavingsAccount build() {
      return null;
    }
  }
}

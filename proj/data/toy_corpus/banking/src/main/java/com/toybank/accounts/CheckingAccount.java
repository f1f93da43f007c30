package com.toybank.accounts;

/**
 * A Account variant.
 */
public class CheckingAccount extends Account {
  private double overdraftLimit;
  private int overdrafts;

  /**
   * Withdraws the given amount, allowing the balance to go negative up to the overdraft limit.
   */
  @Override
  public boolean withdraw(double amount) {
    if (amount > balance + overdraftLimit) {
      return false;
    }
    balance -= amount;
    return true;
  }

  /**
   * Returns the fee charged on this account every month in a thread safe way.
   */
  @Override
  public double monthlyFee() {
    return 2.5 + overdrafts * 15.0;
  }

  /**
   * Liefert den Namen dieser Klasse für CheckingAccount.
   */
  @Override
  public String toString() {
    return "CheckingAccount";
  }

  /** Builder used by tests; nested so the scanner sees a class inside a class. */
  public static final class Builder {
    /** Builds a new CheckingAccount. */
    public CheckingAccount build() {
      return null;
    }
  }
}

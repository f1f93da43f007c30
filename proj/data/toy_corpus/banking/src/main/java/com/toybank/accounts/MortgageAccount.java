package com.toybank.accounts;

/**
 * A Account variant.
 */
public class MortgageAccount extends Account {
  private double principal;
  private double rate;
  private int term;

  /**
   * Always refuses, since a mortgage account only accepts repayments.
   */
  @Override
  public boolean withdraw(double amount) {
    return false;
  }

  /**
   * Returns the monthly mortgage installment including interest.
   */
  @Override
  public double monthlyFee() {
    return principal * rate / (1 - Math.pow(1 + rate, -term));
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
    /** Builds a new MortgageAccount. */
    public MortgageAccount build() {
      return null;
    }
  }
}

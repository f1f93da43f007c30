package com.toybank.accounts;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Common behaviour of every Account.
 */
public abstract class Account {
  protected final Map<String, Object> map = new HashMap<>();
  protected final List<String> buffer = new ArrayList<>();
  protected String input = "";
  protected int pos;
  protected double balance;
  protected boolean running;

  /**
   * Withdraws the given amount from this account.
   * @param amount the amount to take out
   * @return true if the balance allowed it
   */
  public boolean withdraw(double amount) {
    if (amount > balance) {
      return false;
    }
    balance -= amount;
    return true;
  }

  /**
   * Returns the fee charged on this account every month.
   */
  public double monthlyFee() {
    return 0.0;
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
   * Returns the name of this Account.
   */
  public String toString() {
    return name();
  }
}

// Porter (1980) suffix stripper, original rule set.

#include <string>
#include <string_view>

#include "hierdoc/eval.hpp"

namespace hierdoc::eval {

namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : b_(word) {}

  std::string run() {
    if (b_.empty()) return b_;
    k_ = static_cast<int>(b_.size()) - 1;
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return b_.substr(0, static_cast<std::size_t>(k_) + 1);
  }

 private:
  bool cons(int i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0, i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool doublec(int j) const {
    if (j < 1) return false;
    if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j) - 1]) return false;
    return cons(j);
  }

  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = b_[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ + 1 - len), s.size()) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void setto(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void r(std::string_view s) {
    if (m() > 0) setto(s);
  }

  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses"))
        k_ -= 2;
      else if (ends("ies"))
        setto("i");
      else if (k_ >= 1 && at(k_ - 1) != 's')
        --k_;
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        setto("ate");
      } else if (ends("bl")) {
        setto("ble");
      } else if (ends("iz")) {
        setto("ize");
      } else if (doublec(k_)) {
        --k_;
        const char ch = at(k_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else {
        j_ = k_;
        if (m() == 1 && cvc(k_)) setto("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  // First matching suffix wins, whether or not its condition holds.
  template <std::size_t N>
  void rules(const std::pair<std::string_view, std::string_view> (&table)[N]) {
    for (const auto& [suffix, repl] : table) {
      if (ends(suffix)) {
        r(repl);
        return;
      }
    }
  }

  void step2() {
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case 'a': {
        static const std::pair<std::string_view, std::string_view> t[] = {{"ational", "ate"}, {"tional", "tion"}};
        rules(t);
        break;
      }
      case 'c': {
        static const std::pair<std::string_view, std::string_view> t[] = {{"enci", "ence"}, {"anci", "ance"}};
        rules(t);
        break;
      }
      case 'e': {
        static const std::pair<std::string_view, std::string_view> t[] = {{"izer", "ize"}};
        rules(t);
        break;
      }
      case 'l': {
        static const std::pair<std::string_view, std::string_view> t[] = {
            {"abli", "able"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        rules(t);
        break;
      }
      case 'o': {
        static const std::pair<std::string_view, std::string_view> t[] = {
            {"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        rules(t);
        break;
      }
      case 's': {
        static const std::pair<std::string_view, std::string_view> t[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        rules(t);
        break;
      }
      case 't': {
        static const std::pair<std::string_view, std::string_view> t[] = {
            {"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        rules(t);
        break;
      }
      default:
        break;
    }
  }

  void step3() {
    switch (at(k_)) {
      case 'e': {
        static const std::pair<std::string_view, std::string_view> t[] = {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        rules(t);
        break;
      }
      case 'i': {
        static const std::pair<std::string_view, std::string_view> t[] = {{"iciti", "ic"}};
        rules(t);
        break;
      }
      case 'l': {
        static const std::pair<std::string_view, std::string_view> t[] = {{"ical", "ic"}, {"ful", ""}};
        rules(t);
        break;
      }
      case 's': {
        static const std::pair<std::string_view, std::string_view> t[] = {{"ness", ""}};
        rules(t);
        break;
      }
      default:
        break;
    }
  }

  void step4() {
    if (k_ < 1) return;
    static const std::string_view suffixes[] = {"al",  "ance", "ence", "er",  "ic",  "able", "ible",
                                                "ant", "ement", "ment", "ent", "ion", "ou",   "ism",
                                                "ate", "iti",  "ous",  "ive", "ize"};
    for (auto s : suffixes) {
      // Suffix sets are disjoint by penultimate letter except the ement/ment/ent chain,
      // where the longest comes first.
      if (!ends(s)) continue;
      if (s == "ion" && !(j_ >= 0 && (at(j_) == 's' || at(j_) == 't'))) return;
      if (m() > 1) k_ = j_;
      return;
    }
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && doublec(k_)) {
      j_ = k_;
      if (m() > 1) --k_;
    }
  }

  std::string b_;
  int k_ = 0;
  int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace hierdoc::eval

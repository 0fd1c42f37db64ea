#include "genhankel/words.hpp"

#include <algorithm>
#include <stdexcept>

namespace genhankel {

std::vector<int> canonicalize(const std::vector<int>& letters) {
  std::vector<std::pair<int, int>> relabel;  // (old, new)
  std::vector<int> out;
  out.reserve(letters.size());
  for (int x : letters) {
    auto it = std::find_if(relabel.begin(), relabel.end(), [&](const auto& p) { return p.first == x; });
    if (it == relabel.end()) {
      relabel.emplace_back(x, static_cast<int>(relabel.size()));
      out.push_back(relabel.back().second);
    } else {
      out.push_back(it->second);
    }
  }
  return out;
}

Word::Word(std::vector<int> letters) : letters_(canonicalize(letters)) {
  if (letters_.size() % 2 != 0) throw std::invalid_argument("word length must be even");
  const auto k = letters_.size() / 2;
  matches_.assign(k, {0, 0});
  std::vector<int> seen(k, 0);
  for (std::size_t p = 0; p < letters_.size(); ++p) {
    const int id = letters_[p];
    if (static_cast<std::size_t>(id) >= k)
      throw std::invalid_argument("word is not pair-matched: too many distinct letters");
    const int pos = static_cast<int>(p) + 1;
    if (seen[static_cast<std::size_t>(id)] == 0) {
      matches_[static_cast<std::size_t>(id)].first = pos;
    } else if (seen[static_cast<std::size_t>(id)] == 1) {
      matches_[static_cast<std::size_t>(id)].second = pos;
    } else {
      throw std::invalid_argument("word is not pair-matched: a letter occurs more than twice");
    }
    ++seen[static_cast<std::size_t>(id)];
  }
  for (int c : seen)
    if (c != 2) throw std::invalid_argument("word is not pair-matched: a letter occurs once");
}

std::string Word::str() const {
  std::string s;
  for (int id : letters_) {
    if (id < 26) {
      s.push_back(static_cast<char>('a' + id));
    } else {
      s += "{" + std::to_string(id) + "}";
    }
  }
  return s;
}

Word parse_word(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty word");
  std::vector<int> ids;
  for (char c : text) {
    if (c < 'a' || c > 'z')
      throw std::invalid_argument("word must consist of lowercase letters a-z, got '" +
                                  std::string(text) + "'");
    ids.push_back(c - 'a');
  }
  Word w(ids);  // validates pair matching
  if (w.letters() != ids)
    throw std::invalid_argument("word '" + std::string(text) + "' is not canonical; use '" +
                                w.str() + "'");
  return w;
}

namespace {

void extend(std::vector<int>& prefix, std::vector<int>& uses, int k, std::vector<Word>& out) {
  if (static_cast<int>(prefix.size()) == 2 * k) {
    out.emplace_back(prefix);
    return;
  }
  const int opened = static_cast<int>(uses.size());
  // Close an open letter, or open the next one; ids in increasing order keeps
  // the output lexicographic.
  for (int id = 0; id <= opened && id < k; ++id) {
    if (id < opened && uses[static_cast<std::size_t>(id)] == 2) continue;
    if (id == opened) uses.push_back(0);
    ++uses[static_cast<std::size_t>(id)];
    prefix.push_back(id);
    extend(prefix, uses, k, out);
    prefix.pop_back();
    --uses[static_cast<std::size_t>(id)];
    if (id == opened) uses.pop_back();
  }
}

}  // namespace

std::vector<Word> enumerate_pair_matched(int k) {
  if (k < 1 || k > kMaxEnumerationK)
    throw std::invalid_argument("enumerate_pair_matched: k must be in [1, 6]");
  std::vector<Word> out;
  std::vector<int> prefix, uses;
  extend(prefix, uses, k, out);
  return out;
}

bool is_symmetric(const Word& w) {
  for (const auto& [first, second] : w.matches())
    if ((first + second) % 2 == 0) return false;
  return true;
}

bool is_catalan(const Word& w) {
  std::vector<int> stack;
  for (int id : w.letters()) {
    if (!stack.empty() && stack.back() == id) {
      stack.pop_back();
    } else {
      stack.push_back(id);
    }
  }
  return stack.empty();
}

Reduction reduce_double(const Word& w) {
  const auto& l = w.letters();
  for (std::size_t p = 0; p + 1 < l.size(); ++p) {
    if (l[p] == l[p + 1]) {
      std::vector<int> rest(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(p));
      rest.insert(rest.end(), l.begin() + static_cast<std::ptrdiff_t>(p + 2), l.end());
      return {Word(rest), static_cast<int>(p) + 1};
    }
  }
  throw std::invalid_argument("reduce_double: word '" + w.str() + "' has no double letter");
}

std::vector<int> generating_vertices(const Word& w) {
  std::vector<int> s{0};
  for (const auto& m : w.matches()) s.push_back(m.first);
  std::sort(s.begin(), s.end());
  return s;
}

std::int64_t double_factorial_odd(int k) {
  std::int64_t r = 1;
  for (int i = 2 * k - 1; i > 1; i -= 2) r *= i;
  return r;
}

std::int64_t factorial(int k) {
  std::int64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

std::int64_t catalan_number(int k) {
  // C_{i+1} = C_i * 2(2i+1) / (i+2), exact at every step.
  std::int64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::int64_t count_catalan(int k) {
  const auto words = enumerate_pair_matched(k);
  return std::count_if(words.begin(), words.end(), [](const Word& w) { return is_catalan(w); });
}

std::int64_t count_symmetric(int k) {
  const auto words = enumerate_pair_matched(k);
  return std::count_if(words.begin(), words.end(), [](const Word& w) { return is_symmetric(w); });
}

}  // namespace genhankel

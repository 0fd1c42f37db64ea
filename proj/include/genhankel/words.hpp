#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace genhankel {

/// Pair-matched word of length 2k stored as letter ids in canonical form:
/// first occurrences appear in the order 0, 1, 2, ...
///
/// Positions in word arithmetic are 1-based (w[1..2k]); circuit vertex
/// indices run 0..2k.
class Word {
 public:
  Word() = default;
  /// Canonicalizes `letters`. Throws std::invalid_argument unless every
  /// letter occurs exactly twice.
  explicit Word(std::vector<int> letters);

  int k() const { return static_cast<int>(letters_.size() / 2); }
  int length() const { return static_cast<int>(letters_.size()); }
  const std::vector<int>& letters() const { return letters_; }
  /// Letter at 1-based position.
  int at(int pos) const { return letters_[static_cast<std::size_t>(pos - 1)]; }

  /// (first, second) 1-based positions of each letter id, indexed by id.
  const std::vector<std::pair<int, int>>& matches() const { return matches_; }

  std::string str() const;

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  std::vector<int> letters_;
  std::vector<std::pair<int, int>> matches_;
};

/// Relabels letters so first occurrences read 0, 1, 2, ...
std::vector<int> canonicalize(const std::vector<int>& letters);

/// Parses "abba" style text. Rejects non-canonical input with a message that
/// names the canonical form.
Word parse_word(std::string_view text);

inline constexpr int kMaxEnumerationK = 6;

/// All canonical pair-matched words of length 2k, lexicographic. 1 <= k <= 6.
std::vector<Word> enumerate_pair_matched(int k);

/// Each letter sits once at an odd and once at an even position.
bool is_symmetric(const Word& w);

/// Repeatedly deleting adjacent double letters empties the word.
bool is_catalan(const Word& w);

struct Reduction {
  Word word;     // canonical, length 2k - 2
  int position;  // 1-based position i0 of the deleted pair (w[i0] = w[i0+1])
};

/// Removes the leftmost double letter. Throws if there is none.
Reduction reduce_double(const Word& w);

/// S(w): vertex 0 and the positions of first occurrences, ascending.
std::vector<int> generating_vertices(const Word& w);

std::int64_t double_factorial_odd(int k);  // (2k-1)!!
std::int64_t catalan_number(int k);
std::int64_t factorial(int k);

std::int64_t count_catalan(int k);
std::int64_t count_symmetric(int k);

}  // namespace genhankel

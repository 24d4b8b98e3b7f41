#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vislab/geometry.hpp"

namespace vislab {

// x -> lambda * x + z
struct Similitude {
  double lambda = 1.0;
  Point2 z;

  Point2 apply(Point2 p) const { return {lambda * p.x + z.x, lambda * p.y + z.y}; }
  Square apply(const Square& sq) const { return {apply(sq.corner), lambda * sq.side}; }
  Point2 fixed_point() const;
};

// outer after inner.
Similitude compose(const Similitude& outer, const Similitude& inner);

struct IFSystem {
  std::string name;
  std::vector<Similitude> maps;
  Square hull;
  bool osc_asserted = true;

  std::size_t size() const { return maps.size(); }
  bool equal_ratios(double tol = 1e-15) const;
  double min_ratio() const;
  // Throws InvalidInput on fewer than two maps, ratios outside (0,1) or a
  // degenerate hull.
  void validate() const;
};

// Letters are 1-based, as in {1..s}^n.
struct Word {
  std::vector<int> letters;

  std::size_t length() const { return letters.size(); }
  friend bool operator==(const Word&, const Word&) = default;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 1u << 20;  // 4^10

struct DiskNode {
  std::uint64_t index = 0;  // lexicographic rank of the word among {1..s}^n
  Square square;
};

struct Generation {
  IFSystem system;
  int depth = 0;
  std::vector<DiskNode> nodes;

  Word word(std::size_t i) const;
  std::vector<Point2> centers() const;
};

double similarity_dimension(const IFSystem& sys);

// s^n or the budget-exceeded error.
std::uint64_t generation_size(const IFSystem& sys, int n, std::uint64_t budget = kDefaultNodeBudget);

Generation generate_generation(const IFSystem& sys, int n,
                               std::uint64_t budget = kDefaultNodeBudget);

// T_{w_n} o ... o T_{w_1}; the empty word gives the identity.
Similitude compose_word(const IFSystem& sys, const Word& w);

// Word of length n with the given lexicographic rank, and its inverse.
Word word_from_index(std::uint64_t index, int n, std::size_t s);
std::uint64_t index_from_word(const Word& w, std::size_t s);

// True when every word of length L over s letters appears as a contiguous
// block of w.
bool is_generic(const Word& w, int L, std::size_t s);

// Fraction of length-N words that are not generic for L. Exact enumeration
// when s^N <= 4096, otherwise a Monte-Carlo estimate over `samples` words.
double subword_census(const IFSystem& sys, int N, int L, std::uint64_t samples,
                      std::uint64_t seed);

// Presets: "fourcorner", "fourcorner-shifted" (hull [1.5,2.5]^2),
// "gasket3" (three maps of ratio 1/3).
IFSystem preset(std::string_view name);
std::vector<std::string> preset_names();
IFSystem fourcorner();

IFSystem parse_ifs_json(const std::string& text);
IFSystem load_ifs_file(const std::string& path);
// Preset name or path to a JSON description.
IFSystem resolve_ifs(const std::string& name_or_path);

}  // namespace vislab

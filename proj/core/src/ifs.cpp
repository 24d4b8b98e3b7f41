#include "vislab/ifs.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "vislab/errors.hpp"

namespace vislab {

using nlohmann::json;

Point2 Similitude::fixed_point() const {
  if (lambda == 1.0) return {0.0, 0.0};
  return {z.x / (1.0 - lambda), z.y / (1.0 - lambda)};
}

Similitude compose(const Similitude& outer, const Similitude& inner) {
  return {outer.lambda * inner.lambda,
          {outer.lambda * inner.z.x + outer.z.x, outer.lambda * inner.z.y + outer.z.y}};
}

bool IFSystem::equal_ratios(double tol) const {
  for (const auto& m : maps)
    if (std::fabs(m.lambda - maps.front().lambda) > tol) return false;
  return true;
}

double IFSystem::min_ratio() const {
  double r = 1.0;
  for (const auto& m : maps) r = std::min(r, m.lambda);
  return r;
}

void IFSystem::validate() const {
  if (maps.size() < 2) throw InvalidInput("an IFS needs at least two maps");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& m = maps[i];
    if (!(m.lambda > 0.0 && m.lambda < 1.0))
      throw InvalidInput("map " + std::to_string(i + 1) + ": lambda must lie in (0,1)");
    if (!m.z.finite()) throw InvalidInput("map " + std::to_string(i + 1) + ": non-finite z");
  }
  if (!(hull.side > 0.0) || !hull.corner.finite()) throw InvalidInput("hull side must be > 0");
}

Word Generation::word(std::size_t i) const {
  return word_from_index(nodes.at(i).index, depth, system.size());
}

std::vector<Point2> Generation::centers() const {
  std::vector<Point2> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.square.center());
  return out;
}

double similarity_dimension(const IFSystem& sys) {
  sys.validate();
  auto f = [&](double a) {
    double t = 0.0;
    for (const auto& m : sys.maps) t += std::pow(m.lambda, a);
    return t - 1.0;
  };
  if (f(2.0) > 1e-12)
    throw InvalidInput("similarity dimension exceeds 2 (sum of lambda^2 > 1)");
  double lo = 0.0, hi = 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::uint64_t generation_size(const IFSystem& sys, int n, std::uint64_t budget) {
  if (n < 0) throw InvalidInput("depth must be >= 0");
  const std::uint64_t s = sys.size();
  std::uint64_t count = 1;
  for (int k = 0; k < n; ++k) {
    if (count > budget / s) {
      // report the true size, saturating only if it overflows
      long double need = 1;
      for (int j = 0; j < n; ++j) need *= static_cast<long double>(s);
      std::ostringstream msg;
      msg << "depth " << n << " needs " << static_cast<double>(need)
          << " nodes; node budget cap is " << budget;
      throw ResourceError(msg.str());
    }
    count *= s;
  }
  if (count > budget)
    throw ResourceError("depth " + std::to_string(n) + " needs " + std::to_string(count) +
                        " nodes; node budget cap is " + std::to_string(budget));
  return count;
}

Generation generate_generation(const IFSystem& sys, int n, std::uint64_t budget) {
  sys.validate();
  const std::uint64_t total = generation_size(sys, n, budget);
  const std::size_t s = sys.size();
  Generation g{sys, n, {}};
  g.nodes.reserve(total);
  g.nodes.push_back({0, sys.hull});
  std::vector<DiskNode> next;
  for (int k = 0; k < n; ++k) {
    next.clear();
    next.reserve(g.nodes.size() * s);
    for (const auto& node : g.nodes)
      for (std::size_t i = 0; i < s; ++i)
        next.push_back({node.index * s + i, sys.maps[i].apply(node.square)});
    g.nodes.swap(next);
  }
  return g;
}

Similitude compose_word(const IFSystem& sys, const Word& w) {
  Similitude acc{1.0, {0.0, 0.0}};
  for (int letter : w.letters) {
    if (letter < 1 || static_cast<std::size_t>(letter) > sys.size())
      throw InvalidInput("word letter " + std::to_string(letter) + " outside 1.." +
                         std::to_string(sys.size()));
    acc = compose(sys.maps[letter - 1], acc);
  }
  return acc;
}

Word word_from_index(std::uint64_t index, int n, std::size_t s) {
  Word w;
  w.letters.assign(n, 1);
  for (int j = n - 1; j >= 0; --j) {
    w.letters[j] = static_cast<int>(index % s) + 1;
    index /= s;
  }
  return w;
}

std::uint64_t index_from_word(const Word& w, std::size_t s) {
  std::uint64_t idx = 0;
  for (int letter : w.letters) idx = idx * s + static_cast<std::uint64_t>(letter - 1);
  return idx;
}

namespace {

// Codes of all length-L windows, checked against a seen-table of size s^L.
bool generic_with_table(const std::vector<int>& letters, int L, std::size_t s,
                        std::uint64_t span, std::vector<std::uint32_t>& seen,
                        std::uint32_t stamp) {
  const auto N = static_cast<int>(letters.size());
  if (N < L) return false;
  std::uint64_t need = span;
  std::uint64_t code = 0;
  for (int i = 0; i < N; ++i) {
    code = (code * s + static_cast<std::uint64_t>(letters[i] - 1)) % span;
    if (i + 1 < L) continue;
    if (seen[code] != stamp) {
      seen[code] = stamp;
      if (--need == 0) return true;
    }
  }
  return false;
}

std::uint64_t power(std::uint64_t base, int e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

}  // namespace

bool is_generic(const Word& w, int L, std::size_t s) {
  if (L < 1) throw InvalidInput("L must be >= 1");
  const std::uint64_t span = power(s, L, 1u << 26);
  if (span > (1u << 26)) throw ResourceError("s^L too large for subword table");
  std::vector<std::uint32_t> seen(span, 0);
  return generic_with_table(w.letters, L, s, span, seen, 1);
}

double subword_census(const IFSystem& sys, int N, int L, std::uint64_t samples,
                      std::uint64_t seed) {
  if (L < 1 || N < L) throw InvalidInput("subword census needs N >= L >= 1");
  const std::size_t s = sys.size();
  if (s < 2) throw InvalidInput("an IFS needs at least two maps");
  const std::uint64_t span = power(s, L, 1u << 26);
  if (span > (1u << 26)) throw ResourceError("s^L too large for subword table");
  std::vector<std::uint32_t> seen(span, 0);
  std::uint32_t stamp = 0;
  auto next_stamp = [&] {
    if (++stamp == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      stamp = 1;
    }
    return stamp;
  };
  std::vector<int> letters(N);
  const std::uint64_t exhaustive = power(s, N, 4096);
  if (exhaustive <= 4096) {
    std::uint64_t bad = 0;
    for (std::uint64_t idx = 0; idx < exhaustive; ++idx) {
      letters = word_from_index(idx, N, s).letters;
      if (!generic_with_table(letters, L, s, span, seen, next_stamp())) ++bad;
    }
    return static_cast<double>(bad) / static_cast<double>(exhaustive);
  }
  if (samples == 0) throw InvalidInput("Monte-Carlo census needs samples > 0");
  std::mt19937_64 rng(seed);
  std::uint64_t bad = 0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    for (auto& l : letters) l = static_cast<int>(rng() % s) + 1;
    if (!generic_with_table(letters, L, s, span, seen, next_stamp())) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(samples);
}

IFSystem fourcorner() {
  IFSystem sys;
  sys.name = "fourcorner";
  const double q = 0.25;
  sys.maps = {{q, {0.0, 0.0}}, {q, {0.0, 0.75}}, {q, {0.75, 0.0}}, {q, {0.75, 0.75}}};
  sys.hull = {{0.0, 0.0}, 1.0};
  sys.osc_asserted = true;
  return sys;
}

IFSystem preset(std::string_view name) {
  if (name == "fourcorner") return fourcorner();
  if (name == "fourcorner-shifted") {
    // same set, hull moved to [1.5,2.5]^2
    IFSystem sys = fourcorner();
    sys.name = "fourcorner-shifted";
    for (auto& m : sys.maps) m.z = m.z + 0.75 * Point2{1.5, 1.5};
    sys.hull = {{1.5, 1.5}, 1.0};
    return sys;
  }
  if (name == "gasket3") {
    IFSystem sys;
    sys.name = "gasket3";
    const double t = 1.0 / 3.0;
    sys.maps = {{t, {0.0, 0.0}}, {t, {2.0 / 3.0, 0.0}}, {t, {0.0, 2.0 / 3.0}}};
    sys.hull = {{0.0, 0.0}, 1.0};
    return sys;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidInput("unknown IFS preset '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<std::string> preset_names() { return {"fourcorner", "fourcorner-shifted", "gasket3"}; }

IFSystem parse_ifs_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("IFS JSON does not parse: ") + e.what());
  }
  try {
    IFSystem sys;
    sys.name = doc.value("name", std::string("custom"));
    for (const auto& m : doc.at("maps")) {
      const auto& z = m.at("z");
      if (z.size() != 2) throw InvalidInput("IFS map z must have two components");
      sys.maps.push_back({m.at("lambda").get<double>(), {z[0].get<double>(), z[1].get<double>()}});
    }
    const auto& hull = doc.at("hull");
    const auto& corner = hull.at("corner");
    if (corner.size() != 2) throw InvalidInput("hull corner must have two components");
    sys.hull = {{corner[0].get<double>(), corner[1].get<double>()}, hull.at("side").get<double>()};
    sys.osc_asserted = doc.value("osc", true);
    sys.validate();
    return sys;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("IFS JSON has wrong shape: ") + e.what());
  }
}

IFSystem load_ifs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open IFS file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ifs_json(buf.str());
}

IFSystem resolve_ifs(const std::string& name_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return preset(name_or_path);
  return load_ifs_file(name_or_path);
}

}  // namespace vislab

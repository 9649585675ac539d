#pragma once
// Symbolic scaling functions n^alpha * (log n)^beta (natural log), with the
// boundary sentinels n and 1. The family is closed under geometric means,
// has a decidable domination order (lexicographic on the exponent pair), and
// every member admitted by the constructor is strictly increasing with
// strictly increasing n/f(n) from the evaluation floor n >= 3 upward, which
// keeps every solver below a plain bisection.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace permlab {

namespace detail {

// ceil/floor with a relative guard so solver outputs that are integers up to
// bisection tolerance land on the integer.
inline std::int64_t eps_ceil(double x) {
  const double adj = x - 1e-9 * std::max(1.0, std::fabs(x));
  if (adj > 9.1e18) throw std::invalid_argument("invalid-argument: value overflows 64 bits");
  return static_cast<std::int64_t>(std::ceil(adj));
}

inline std::int64_t eps_floor(double x) {
  const double adj = x + 1e-9 * std::max(1.0, std::fabs(x));
  if (adj > 9.1e18) throw std::invalid_argument("invalid-argument: value overflows 64 bits");
  return static_cast<std::int64_t>(std::floor(adj));
}

}  // namespace detail

class ScalingFunction {
 public:
  // Evaluation floor; log(3) > 1 keeps (log n)^beta monotone and positive.
  static constexpr double kMinArgument = 3.0;

  static ScalingFunction sentinel_n() { return ScalingFunction(1.0, 0.0); }
  static ScalingFunction unit() { return ScalingFunction(0.0, 0.0); }

  // Proper family members sit lexicographically between the sentinels, which
  // is exactly the 1 << f << n requirement within this family.
  static ScalingFunction power_log(double alpha, double beta) {
    if (alpha == 1.0 && beta == 0.0) return sentinel_n();
    if (alpha == 0.0 && beta == 0.0) return unit();
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("invalid-argument: alpha must lie in [0,1]");
    }
    const bool above_one = alpha > 0.0 || beta > 0.0;
    const bool below_n = alpha < 1.0 || beta < 0.0;
    if (!above_one || !below_n) {
      throw std::invalid_argument("invalid-argument: not a scaling function (needs 1 << f << n)");
    }
    return ScalingFunction(alpha, beta);
  }

  // Text grammar: "n", "1", "n^<real>", "n^<real>*log^<real>".
  static ScalingFunction parse(std::string_view text) {
    const std::string s(text);
    if (s == "n") return sentinel_n();
    if (s == "1") return unit();
    if (s.rfind("n^", 0) != 0) {
      throw std::invalid_argument("invalid-argument: cannot parse scaling function '" + s + "'");
    }
    const std::string rest = s.substr(2);
    const std::size_t star = rest.find("*log^");
    double alpha = 0.0;
    double beta = 0.0;
    try {
      std::size_t pos = 0;
      const std::string alpha_text = star == std::string::npos ? rest : rest.substr(0, star);
      alpha = std::stod(alpha_text, &pos);
      if (pos != alpha_text.size()) throw std::invalid_argument("trailing characters");
      if (star != std::string::npos) {
        const std::string beta_text = rest.substr(star + 5);
        beta = std::stod(beta_text, &pos);
        if (pos != beta_text.size()) throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid-argument: cannot parse scaling function '" + s + "'");
    }
    return power_log(alpha, beta);
  }

  std::string to_string() const {
    if (is_sentinel_n()) return "n";
    if (is_unit()) return "1";
    std::string out = "n^" + format_real(alpha_);
    if (beta_ != 0.0) out += "*log^" + format_real(beta_);
    return out;
  }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  bool is_sentinel_n() const { return alpha_ == 1.0 && beta_ == 0.0; }
  bool is_unit() const { return alpha_ == 0.0 && beta_ == 0.0; }
  bool is_proper() const { return !is_sentinel_n() && !is_unit(); }

  // Clamped evaluation: the result always lies in [1, n].
  double evaluate(double n) const {
    const double raw = evaluate_unclamped(n);
    return std::min(n, std::max(1.0, raw));
  }

  // Unclamped evaluation used by the solvers on the monotone branch.
  double evaluate_unclamped(double n) const {
    if (!(n >= kMinArgument - 1e-12)) {
      throw std::invalid_argument("invalid-argument: evaluation below domain floor");
    }
    if (is_unit()) return 1.0;
    if (is_sentinel_n()) return n;
    return std::exp(alpha_ * std::log(n) + beta_ * std::log(std::log(n)));
  }

  // Point from which f is strictly increasing: members with a negative log
  // exponent dip until log(n) = -beta/alpha.
  double increasing_from() const {
    if (is_unit() || is_sentinel_n()) return kMinArgument;
    if (alpha_ > 0.0 && beta_ < 0.0) {
      return std::max(kMinArgument, std::exp(-beta_ / alpha_));
    }
    return kMinArgument;
  }

  // Point from which n/f is strictly increasing (equivalently f(n)/n is
  // strictly decreasing): log(n) = beta/(1-alpha) for positive log exponents.
  double ratio_monotone_from() const {
    if (is_unit() || is_sentinel_n()) return kMinArgument;
    if (alpha_ < 1.0 && beta_ > 0.0) {
      return std::max(kMinArgument, std::exp(beta_ / (1.0 - alpha_)));
    }
    return kMinArgument;
  }

  friend bool operator==(const ScalingFunction& a, const ScalingFunction& b) = default;

 private:
  static std::string format_real(double x) {
    char buf[32];
    const int written = std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf, static_cast<std::size_t>(written));
    // shortest round-trip representation
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof shorter, "%.*g", prec, x);
      if (std::stod(shorter) == x) return std::string(shorter);
    }
    return s;
  }

  ScalingFunction(double alpha, double beta) : alpha_(alpha), beta_(beta) {}
  double alpha_;
  double beta_;
};

enum class DominationOrder {
  kFirstSmaller,   // f << g
  kSecondSmaller,  // g << f
  kEquivalent,
};

// Lexicographic comparison on (alpha, beta): f << g iff the pair of f is
// smaller. Constant factors do not move a function within the order.
inline DominationOrder domination_order(const ScalingFunction& f, const ScalingFunction& g) {
  if (f.alpha() < g.alpha()) return DominationOrder::kFirstSmaller;
  if (f.alpha() > g.alpha()) return DominationOrder::kSecondSmaller;
  if (f.beta() < g.beta()) return DominationOrder::kFirstSmaller;
  if (f.beta() > g.beta()) return DominationOrder::kSecondSmaller;
  return DominationOrder::kEquivalent;
}

// x with f(x) = y, by bisection on the increasing branch of the evaluation.
inline double inverse_at(const ScalingFunction& f, double y) {
  if (f.is_unit()) {
    throw std::invalid_argument("invalid-argument: constant function has no inverse");
  }
  if (f.is_sentinel_n()) {
    if (y < ScalingFunction::kMinArgument) {
      throw std::invalid_argument("invalid-argument: inverse target below domain");
    }
    return y;
  }
  double lo = f.increasing_from();
  if (y < f.evaluate_unclamped(lo) * (1.0 - 1e-12)) {
    throw std::invalid_argument("invalid-argument: inverse target below domain");
  }
  double hi = std::max(lo * 2.0, y);
  while (f.evaluate_unclamped(hi) < y) {
    hi *= 2.0;
    if (hi > 1e300) throw std::invalid_argument("invalid-argument: inverse target unreachable");
  }
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f.evaluate_unclamped(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Copy-count factor for moving a sequence from scale f down to f_down:
// the largest c with f_down(c*u) = f(u), i.e. f_down^{-1}(f(u)) / u.
inline double scale_down_factor(const ScalingFunction& f, const ScalingFunction& f_down,
                                double u) {
  if (domination_order(f_down, f) != DominationOrder::kFirstSmaller) {
    throw std::invalid_argument("invalid-argument: target scale must be dominated");
  }
  const double y = f.evaluate_unclamped(u);
  const double floor = f_down.increasing_from();
  if (!f_down.is_proper() || y <= f_down.evaluate_unclamped(floor)) {
    return floor / u;
  }
  return inverse_at(f_down, y) / u;
}

// Block-size factor for moving a sequence from scale f up to f_up: the
// largest d with f_up(d*u) = d * f(u); with g(x) = f_up(x)/x strictly
// decreasing this is g^{-1}(f(u)/u) / u.
inline double scale_up_factor(const ScalingFunction& f, const ScalingFunction& f_up, double u) {
  if (domination_order(f, f_up) != DominationOrder::kFirstSmaller) {
    throw std::invalid_argument("invalid-argument: target scale must dominate");
  }
  const double target = f.evaluate_unclamped(u) / u;
  const auto ratio = [&f_up](double x) { return f_up.evaluate_unclamped(x) / x; };
  double lo = f_up.ratio_monotone_from();
  if (ratio(lo) <= target) return lo / u;
  double hi = std::max(lo * 2.0, u);
  while (ratio(hi) > target) {
    hi *= 2.0;
    if (hi > 1e300) throw std::invalid_argument("invalid-argument: solver target unreachable");
  }
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (ratio(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) / u;
}

// Exponent-pair average; sits strictly between its arguments in domination.
inline ScalingFunction geometric_mean(const ScalingFunction& f, const ScalingFunction& g) {
  return ScalingFunction::power_log(0.5 * (f.alpha() + g.alpha()),
                                    0.5 * (f.beta() + g.beta()));
}

namespace detail {

// Ratio of two family members as an exponent difference.
struct ExponentRatio {
  double d_alpha;
  double d_beta;

  double eval(double n) const {
    return std::exp(d_alpha * std::log(n) + d_beta * std::log(std::log(n)));
  }

  // Least integer N >= 3 with eval(n) >= m for all n >= N. The ratio is
  // eventually increasing; a possible early dip is handled via its turning
  // point.
  std::int64_t min_threshold(double m) const {
    const double thresh = m * (1.0 - 1e-9);
    double turn = ScalingFunction::kMinArgument;
    if (d_alpha > 0.0 && d_beta < 0.0) {
      turn = std::max(turn, std::exp(-d_beta / d_alpha));
    }
    if (eval(turn) >= thresh) return 3;
    double lo = turn;
    double hi = std::max(turn * 2.0, 8.0);
    while (eval(hi) < thresh) {
      hi *= 2.0;
      if (hi > 1e300) {
        throw std::invalid_argument("invalid-argument: threshold unreachable");
      }
    }
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-9 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (eval(mid) < thresh) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    std::int64_t candidate = std::max<std::int64_t>(3, eps_ceil(hi));
    while (eval(static_cast<double>(candidate)) < thresh) ++candidate;
    while (candidate > 3 && static_cast<double>(candidate - 1) >= turn &&
           eval(static_cast<double>(candidate - 1)) >= thresh) {
      --candidate;
    }
    return candidate;
  }
};

inline ExponentRatio exponent_ratio(const ScalingFunction& hi, const ScalingFunction& lo) {
  return ExponentRatio{hi.alpha() - lo.alpha(), hi.beta() - lo.beta()};
}

}  // namespace detail

// Requires `scales` strictly descending by domination.
inline void require_strictly_descending(const std::vector<ScalingFunction>& scales) {
  for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
    if (domination_order(scales[i + 1], scales[i]) != DominationOrder::kFirstSmaller) {
      throw std::invalid_argument(
          "invalid-argument: scales must be strictly ordered by domination");
    }
  }
}

// Least integer N such that, with intermediate levels h_l halfway (in
// exponent) between consecutive scales and the sentinels n and 1 at the ends,
// every adjacent ratio is at least m for all n >= N.
inline std::int64_t find_threshold(const std::vector<ScalingFunction>& scales, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("invalid-argument: m must be >= 1");
  if (scales.empty()) throw std::invalid_argument("invalid-argument: no scales given");
  require_strictly_descending(scales);
  for (const ScalingFunction& s : scales) {
    if (!s.is_proper()) {
      throw std::invalid_argument("invalid-argument: scales must be proper scaling functions");
    }
  }
  std::vector<ScalingFunction> levels;
  levels.push_back(ScalingFunction::sentinel_n());
  levels.insert(levels.end(), scales.begin(), scales.end());
  levels.push_back(ScalingFunction::unit());
  std::int64_t best = 3;
  for (std::size_t l = 1; l < levels.size(); ++l) {
    const ScalingFunction mid = geometric_mean(levels[l - 1], levels[l]);
    best = std::max(best,
                    detail::exponent_ratio(levels[l - 1], mid).min_threshold(static_cast<double>(m)));
    best = std::max(best,
                    detail::exponent_ratio(mid, levels[l]).min_threshold(static_cast<double>(m)));
  }
  return best;
}

}  // namespace permlab

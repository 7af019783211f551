#include "dynkin/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynkin/errors.hpp"

namespace dynkin {

Region Region::upper(double y, double hi) {
  if (!(y <= hi)) throw SpecError("upper region needs y <= right end");
  Region r;
  r.iv_ = {{y, hi}};
  r.shape_ = Shape::Upper;
  return r;
}

Region Region::lower(double x, double lo) {
  if (!(x >= lo)) throw SpecError("lower region needs x >= left end");
  Region r;
  r.iv_ = {{lo, x}};
  r.shape_ = Shape::Lower;
  return r;
}

Region Region::inner(double l1, double l2, double lo) {
  if (!(l1 > lo))
    throw SpecError("degenerate region: inner interval must start strictly inside the domain");
  if (!(l1 <= l2)) throw SpecError("inner region needs l1 <= l2");
  Region r;
  r.iv_ = {{l1, l2}};
  r.shape_ = Shape::Inner;
  return r;
}

Region Region::from_intervals(std::vector<std::pair<double, double>> iv) {
  for (const auto& [u, v] : iv)
    if (!(u <= v) || !std::isfinite(u) || !std::isfinite(v)) throw SpecError("bad interval in region");
  std::sort(iv.begin(), iv.end());
  Region r;
  for (const auto& p : iv) {
    if (!r.iv_.empty() && p.first <= r.iv_.back().second)
      r.iv_.back().second = std::max(r.iv_.back().second, p.second);
    else
      r.iv_.push_back(p);
  }
  r.shape_ = Shape::General;
  return r;
}

bool Region::contains(double x) const {
  for (const auto& [u, v] : iv_)
    if (x >= u && x <= v) return true;
  return false;
}

std::string Region::describe() const {
  std::ostringstream os;
  os.precision(10);
  if (iv_.empty()) return "{}";
  for (std::size_t k = 0; k < iv_.size(); ++k) {
    if (k) os << " U ";
    os << "[" << iv_[k].first << ", " << iv_[k].second << "]";
  }
  return os.str();
}

Reduction::Reduction(const PiecewisePoly& g, Region region) : g_(g), region_(std::move(region)) {
  const double lo = g_.lo(), hi = g_.hi();
  for (const auto& [u, v] : region_.intervals())
    if (u < lo || v > hi) throw DomainError("region " + region_.describe() + " leaves the domain");
  double prev = lo;
  double prev_val = 0.0;
  bool prev_in_region = false;
  for (const auto& [u, v] : region_.intervals()) {
    if (u > prev)
      gaps_.push_back({prev, u, prev_in_region ? g_.eval_piece(prev) : 0.0, g_.eval_piece(u)});
    prev = v;
    prev_val = g_.eval_piece(v);
    prev_in_region = true;
  }
  if (prev < hi) gaps_.push_back({prev, hi, prev_in_region ? prev_val : 0.0, 0.0});
}

const Reduction::Gap* Reduction::gap_of(double x) const {
  for (const auto& gap : gaps_)
    if (x > gap.u && x < gap.v) return &gap;
  return nullptr;
}

double Reduction::operator()(double x) const {
  if (x < g_.lo() || x > g_.hi()) throw DomainError("reduction evaluated outside its domain");
  if (const Gap* gap = gap_of(x)) return gap->gu + (gap->gv - gap->gu) * (x - gap->u) / (gap->v - gap->u);
  if (region_.contains(x)) return g_.eval_piece(x);
  return 0.0;  // killed endpoint
}

double Reduction::derivative(double x) const {
  if (const Gap* gap = gap_of(x)) return (gap->gv - gap->gu) / (gap->v - gap->u);
  if (region_.contains(x)) return g_.eval_piece(x, 1);
  return 0.0;
}

PiecewisePoly Reduction::as_poly() const {
  struct Part {
    double u, v;
    const Gap* gap;
  };
  std::vector<Part> parts;
  for (const auto& gap : gaps_) parts.push_back({gap.u, gap.v, &gap});
  for (const auto& [u, v] : region_.intervals())
    if (u < v) parts.push_back({u, v, nullptr});
  std::sort(parts.begin(), parts.end(), [](const Part& p, const Part& q) { return p.u < q.u; });
  std::vector<PiecewisePoly> polys;
  for (const auto& p : parts) {
    if (p.gap) {
      const double slope = (p.gap->gv - p.gap->gu) / (p.v - p.u);
      polys.emplace_back(std::vector<double>{p.u, p.v}, std::vector<std::vector<double>>{{p.gap->gu, slope}});
    } else {
      polys.push_back(g_.restricted(p.u, p.v));
    }
  }
  return PiecewisePoly::concat(polys);
}

Reduction reduce(const PiecewisePoly& g, const Region& region) { return Reduction(g, region); }

namespace {

PiecewisePoly segment(double u, double v, double fu, double fv) {
  return PiecewisePoly({u, v}, {{fu, (fv - fu) / (v - u)}});
}

void check_player(int player) {
  if (player != 1 && player != 2) throw DomainError("player must be 1 or 2");
}

}  // namespace

PiecewisePoly threshold_payoff(const GameSpec& spec, int player, const ThresholdStrategy& s) {
  check_player(player);
  const double lo = spec.lo(), hi = spec.hi();
  if (!(s.l >= lo && s.l < s.r && s.r <= hi))
    throw DomainError("threshold strategy needs lo <= l < r <= hi");
  const auto& R = spec.rewards;
  const PiecewisePoly& stop_low = player == 1 ? R.f1 : R.g2;   // payoff when X reaches [lo, l]
  const PiecewisePoly& stop_high = player == 1 ? R.g1 : R.f2;  // payoff when X reaches [r, hi]
  std::vector<PiecewisePoly> parts;
  if (s.l > lo) parts.push_back(stop_low.restricted(lo, s.l));
  parts.push_back(segment(s.l, s.r, stop_low.eval_piece(s.l), stop_high.eval_piece(s.r)));
  if (s.r < hi) parts.push_back(stop_high.restricted(s.r, hi));
  return PiecewisePoly::concat(parts);
}

PiecewisePoly two_interval_payoff(const GameSpec& spec, int player, const TwoIntervalStrategy& s) {
  check_player(player);
  const double lo = spec.lo(), hi = spec.hi();
  if (!(s.l1 > lo && s.l1 <= s.l2 && s.l2 < s.r && s.r <= hi))
    throw DomainError("two-interval strategy needs lo < l1 <= l2 < r <= hi");
  const auto& R = spec.rewards;
  const PiecewisePoly& mid = player == 1 ? R.f1 : R.g2;
  const PiecewisePoly& top = player == 1 ? R.g1 : R.f2;
  std::vector<PiecewisePoly> parts;
  parts.push_back(segment(lo, s.l1, 0.0, mid.eval_piece(s.l1)));
  if (s.l2 > s.l1) parts.push_back(mid.restricted(s.l1, s.l2));
  parts.push_back(segment(s.l2, s.r, mid.eval_piece(s.l2), top.eval_piece(s.r)));
  if (s.r < hi) parts.push_back(top.restricted(s.r, hi));
  return PiecewisePoly::concat(parts);
}

double hit_probability(double x, const ThresholdStrategy& s) {
  if (x <= s.l) return 1.0;
  if (x >= s.r) return 0.0;
  return (s.r - x) / (s.r - s.l);
}

}  // namespace dynkin

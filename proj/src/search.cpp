#include "rightangle/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "rightangle/error.hpp"

namespace rightangle::search {

void SearchBudget::validate() const {
  if (!exhaustive && !max_nodes && !max_seconds) {
    throw Error(ErrorKind::Usage, "search budget needs a node limit, a time limit, or exhaustive mode");
  }
  if (threads == 0) throw Error(ErrorKind::Usage, "thread count must be positive");
}

namespace {

constexpr std::size_t kMaxSpace = std::size_t{1} << 20;
constexpr std::size_t kGramLimit = 2048;
constexpr std::size_t kMaskBytesLimit = std::size_t{32} << 20;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Fixed-size bitset over point indices.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t size) : words_((size + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  /// Bits strictly above i.
  Bits above(std::size_t i) const {
    Bits out = *this;
    const std::size_t w = i / 64;
    for (std::size_t k = 0; k < w; ++k) out.words_[k] = 0;
    const std::size_t shift = i % 64 + 1;
    out.words_[w] &= shift == 64 ? 0 : ~std::uint64_t{0} << shift;
    return out;
  }
  void and_not(const std::uint64_t* other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other[k];
  }
  template <typename F>
  void for_each(F&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        const int b = std::countr_zero(w);
        if (!fn(k * 64 + static_cast<std::size_t>(b))) return;
        w &= w - 1;
      }
    }
  }
  std::size_t words() const { return words_.size(); }

 private:
  std::vector<std::uint64_t> words_;
};

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

void require_dimension(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::BadDimension, "dimension must be positive");
}

void verify_or_die(const PointSet& best) {
  if (auto w = geometry::find_right_angle(best)) {
    throw std::logic_error("search produced a set containing a right angle at vertex " +
                           std::to_string(w->vertex));
  }
}

}  // namespace

PointSpace::PointSpace(FieldSpec field, std::size_t n) : field_(std::move(field)), n_(n), size_(1) {
  require_dimension(n);
  for (std::size_t i = 0; i < n; ++i) {
    size_ *= field_.q();
    if (size_ > kMaxSpace) throw Error(ErrorKind::TooLarge, "q^n exceeds " + std::to_string(kMaxSpace));
  }
  coords_.resize(size_ * n_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::size_t rest = idx;
    for (std::size_t t = n_; t-- > 0;) {
      coords_[idx * n_ + t] = static_cast<std::uint16_t>(rest % field_.q());
      rest /= field_.q();
    }
  }
  if (size_ <= kGramLimit) {
    gram_.resize(size_ * size_);
    for (std::size_t i = 0; i < size_; ++i) {
      for (std::size_t j = i; j < size_; ++j) {
        FieldElement acc = field_.zero();
        for (std::size_t t = 0; t < n_; ++t) {
          acc = field_.add(acc, field_.mul(FieldElement(coords_[i * n_ + t]), FieldElement(coords_[j * n_ + t])));
        }
        gram_[i * size_ + j] = gram_[j * size_ + i] = static_cast<std::uint16_t>(acc.code());
      }
    }
  }
}

gf::Point PointSpace::point(std::size_t index) const {
  gf::Point p = gf::zero_point(n_);
  for (std::size_t t = 0; t < n_; ++t) p.coords[t] = FieldElement(coords_[index * n_ + t]);
  return p;
}

std::size_t PointSpace::index_of(const gf::Point& p) const {
  if (p.dim() != n_) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  std::size_t idx = 0;
  for (auto c : p.coords) idx = idx * field_.q() + c.code();
  return idx;
}

FieldElement PointSpace::dot(std::size_t i, std::size_t j) const {
  if (!gram_.empty()) return FieldElement(gram_[i * size_ + j]);
  FieldElement acc = field_.zero();
  for (std::size_t t = 0; t < n_; ++t) {
    acc = field_.add(acc, field_.mul(FieldElement(coords_[i * n_ + t]), FieldElement(coords_[j * n_ + t])));
  }
  return acc;
}

bool PointSpace::right_angle(std::size_t x, std::size_t y, std::size_t z) const {
  if (x == y || x == z || y == z) return false;
  // <z-x, y-x> = <z,y> - <z,x> - <x,y> + <x,x>
  const auto& f = field_;
  const FieldElement v = f.sub(f.add(dot(z, y), dot(x, x)), f.add(dot(z, x), dot(x, y)));
  return v.is_zero();
}

bool PointSpace::conflict(std::size_t a, std::size_t b, std::size_t z) const {
  return right_angle(a, b, z) || right_angle(b, a, z) || right_angle(z, a, b);
}

std::size_t PointSpace::orbit_min(std::size_t index) const {
  // The lexicographically least rearrangement of a tuple is its sorted form.
  std::size_t best = index;
  std::vector<std::uint16_t> tuple(n_);
  for (std::uint32_t lambda = 1; lambda < field_.q(); ++lambda) {
    for (std::size_t t = 0; t < n_; ++t) {
      tuple[t] = static_cast<std::uint16_t>(field_.mul(FieldElement(lambda), FieldElement(coords_[index * n_ + t])).code());
    }
    std::sort(tuple.begin(), tuple.end());
    std::size_t idx = 0;
    for (auto c : tuple) idx = idx * field_.q() + c;
    best = std::min(best, idx);
  }
  return best;
}

PointSet PointSpace::to_point_set(std::vector<std::size_t> indices) const {
  std::sort(indices.begin(), indices.end());
  std::vector<gf::Point> pts;
  pts.reserve(indices.size());
  for (auto i : indices) pts.push_back(point(i));
  return PointSet(field_, n_, std::move(pts));
}

// ---------------------------------------------------------------------------
// Brute-force oracle

SearchResult exhaustive_max(const FieldSpec& f, std::size_t n, const SearchBudget& budget) {
  budget.validate();
  require_dimension(n);
  const auto start = Clock::now();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= f.q();
    if (total > 12) throw Error(ErrorKind::TooLarge, "exhaustive search needs q^n <= 12");
  }
  std::vector<gf::Point> all;
  for (std::size_t idx = 0; idx < total; ++idx) {
    gf::Point p = gf::zero_point(n);
    std::size_t rest = idx;
    for (std::size_t t = n; t-- > 0;) {
      p.coords[t] = FieldElement(static_cast<std::uint32_t>(rest % f.q()));
      rest /= f.q();
    }
    all.push_back(std::move(p));
  }

  auto free_subset = [&](std::uint32_t mask) {
    std::vector<const gf::Point*> pts;
    for (std::size_t i = 0; i < total; ++i) {
      if (mask >> i & 1u) pts.push_back(&all[i]);
    }
    for (const auto* x : pts) {
      for (const auto* y : pts) {
        for (const auto* z : pts) {
          if (geometry::is_right_angle(f, *x, *y, *z)) return false;
        }
      }
    }
    return true;
  };

  std::uint64_t nodes = 0;
  std::optional<std::uint32_t> found;
  bool out_of_budget = false;
  for (std::size_t s = total; s >= 1 && !found && !out_of_budget; --s) {
    // Gosper's hack over masks of popcount s.
    std::uint32_t mask = (std::uint32_t{1} << s) - 1;
    const std::uint32_t limit = std::uint32_t{1} << total;
    while (mask < limit) {
      ++nodes;
      if ((budget.max_nodes && nodes > *budget.max_nodes) ||
          (budget.max_seconds && (nodes & 63) == 0 && seconds_since(start) > *budget.max_seconds)) {
        out_of_budget = true;
        break;
      }
      if (free_subset(mask)) {
        found = mask;
        break;
      }
      const std::uint32_t c = mask & (~mask + 1);
      const std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }

  std::vector<gf::Point> best;
  if (found) {
    for (std::size_t i = 0; i < total; ++i) {
      if (*found >> i & 1u) best.push_back(all[i]);
    }
  } else {
    best.push_back(all[0]);
  }
  PointSet best_set(f, n, std::move(best));
  verify_or_die(best_set);
  const std::size_t size = best_set.size();
  return SearchResult{n,
                      f.q(),
                      std::move(best_set),
                      size,
                      found ? Status::Exact : Status::LowerBound,
                      nodes,
                      seconds_since(start),
                      SearchConfig{"exhaustive", budget, false, std::nullopt, 0},
                      std::nullopt};
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

class BranchSearch {
 public:
  BranchSearch(const PointSpace& space, const SearchBudget& budget) : space_(space), budget_(budget) {
    const std::size_t n = space_.size();
    words_ = (n + 63) / 64;
    if (n * n * words_ * 8 <= kMaskBytesLimit) {
      masks_.assign(n * n * words_, 0);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          for (std::size_t z = 0; z < n; ++z) {
            if (space_.conflict(a, b, z)) {
              masks_[(a * n + b) * words_ + z / 64] |= std::uint64_t{1} << (z % 64);
            }
          }
          std::copy_n(&masks_[(a * n + b) * words_], words_, &masks_[(b * n + a) * words_]);
        }
      }
    }
    if (budget_.max_nodes && *budget_.max_nodes < 65536) flush_mask_ = 0;
    start_ = Clock::now();
  }

  void seed_best(std::vector<std::size_t> best) {
    best_size_ = best.size();
    best_ = std::move(best);
  }
  void add_nodes(std::uint64_t n) { nodes_ += n; }

  /// Runs the given top-level branches (second point index); returns the
  /// completed ones.
  std::vector<std::size_t> run(const std::vector<std::size_t>& branches, unsigned threads) {
    std::atomic<std::size_t> next{0};
    std::mutex done_mu;
    std::vector<std::size_t> completed;
    auto worker = [&] {
      std::uint64_t local = 0;
      while (!stop_.load()) {
        const std::size_t b = next.fetch_add(1);
        if (b >= branches.size()) break;
        if (run_branch(branches[b], local)) {
          std::lock_guard lock(done_mu);
          completed.push_back(branches[b]);
        }
      }
      nodes_ += local;
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    std::sort(completed.begin(), completed.end());
    return completed;
  }

  std::vector<std::size_t> best() const { return best_; }
  std::uint64_t nodes() const { return nodes_.load(); }
  double elapsed() const { return seconds_since(start_); }

 private:
  bool run_branch(std::size_t second, std::uint64_t& local) {
    std::vector<std::size_t> chosen{0, second};
    Bits all(space_.size());
    for (std::size_t z = second + 1; z < space_.size(); ++z) all.set(z);
    Bits cand = filter(all, chosen, second);
    return dfs(chosen, cand, local);
  }

  // Candidates of `cand` compatible with the new point `p` paired with every
  // other chosen point.
  Bits filter(const Bits& cand, const std::vector<std::size_t>& chosen, std::size_t p) const {
    Bits out = cand;
    const std::size_t n = space_.size();
    if (!masks_.empty()) {
      for (std::size_t s : chosen) {
        if (s != p) out.and_not(&masks_[(p * n + s) * words_]);
      }
      return out;
    }
    cand.for_each([&](std::size_t z) {
      for (std::size_t s : chosen) {
        if (s != p && space_.conflict(p, s, z)) {
          out.reset(z);
          break;
        }
      }
      return true;
    });
    return out;
  }

  bool tick(std::uint64_t& local) {
    ++local;
    if ((local & flush_mask_) != 0) return !stop_.load(std::memory_order_relaxed);
    const std::uint64_t total = nodes_.fetch_add(local) + local;
    local = 0;
    if (budget_.max_nodes && total > *budget_.max_nodes) stop_ = true;
    if (budget_.max_seconds && elapsed() > *budget_.max_seconds) stop_ = true;
    return !stop_.load();
  }

  void offer(const std::vector<std::size_t>& chosen) {
    if (chosen.size() <= best_size_.load()) return;
    std::lock_guard lock(best_mu_);
    if (chosen.size() > best_size_.load()) {
      best_ = chosen;
      best_size_ = chosen.size();
    }
  }

  bool dfs(std::vector<std::size_t>& chosen, const Bits& cand, std::uint64_t& local) {
    if (!tick(local)) return false;
    offer(chosen);
    std::size_t remaining = cand.count();
    if (chosen.size() + remaining <= best_size_.load()) return true;
    bool ok = true;
    cand.for_each([&](std::size_t z) {
      if (chosen.size() + remaining <= best_size_.load()) return false;
      --remaining;
      chosen.push_back(z);
      const Bits next = filter(cand.above(z), chosen, z);
      ok = dfs(chosen, next, local);
      chosen.pop_back();
      return ok;
    });
    return ok;
  }

  const PointSpace& space_;
  SearchBudget budget_;
  std::size_t words_ = 0;
  std::uint64_t flush_mask_ = 255;
  std::vector<std::uint64_t> masks_;
  Clock::time_point start_;
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<std::size_t> best_size_{0};
  std::mutex best_mu_;
  std::vector<std::size_t> best_;
};

}  // namespace

SearchResult branch_and_bound_max(const FieldSpec& f, std::size_t n, const SearchBudget& budget,
                                  const BranchOptions& options) {
  budget.validate();
  const PointSpace space(f, n);
  BranchSearch search(space, budget);

  std::set<std::size_t> done;
  std::vector<std::size_t> best{0};
  if (const Checkpoint* cp = options.resume) {
    if (cp->version != Checkpoint::kVersion || cp->n != n || cp->q != f.q() ||
        cp->orbit_reduction != options.orbit_reduction) {
      throw Error(ErrorKind::Usage, "checkpoint does not match this search");
    }
    for (auto b : cp->completed_branches) done.insert(static_cast<std::size_t>(b));
    if (!cp->best_indices.empty()) {
      std::vector<std::size_t> seeded;
      for (auto i : cp->best_indices) {
        if (i >= space.size()) throw Error(ErrorKind::Parse, "checkpoint point index out of range");
        seeded.push_back(static_cast<std::size_t>(i));
      }
      if (geometry::find_right_angle(space.to_point_set(seeded))) {
        throw Error(ErrorKind::Parse, "checkpoint best set contains a right angle");
      }
      if (seeded.size() > best.size()) best = std::move(seeded);
    }
    search.add_nodes(cp->nodes);
  }
  search.seed_best(best);

  std::vector<std::size_t> pending;
  for (std::size_t s = 1; s < space.size(); ++s) {
    if (done.count(s)) continue;
    if (options.orbit_reduction && space.orbit_min(s) != s) {
      done.insert(s);
      continue;
    }
    pending.push_back(s);
  }
  for (auto b : search.run(pending, budget.threads)) done.insert(b);

  const bool exact = done.size() + 1 == space.size();
  auto best_indices = search.best();
  PointSet best_set = space.to_point_set(best_indices);
  verify_or_die(best_set);

  Checkpoint cp;
  cp.n = n;
  cp.q = f.q();
  cp.orbit_reduction = options.orbit_reduction;
  cp.completed_branches.assign(done.begin(), done.end());
  std::sort(best_indices.begin(), best_indices.end());
  cp.best_indices.assign(best_indices.begin(), best_indices.end());
  cp.nodes = search.nodes();

  const std::size_t size = best_set.size();
  return SearchResult{n,
                      f.q(),
                      std::move(best_set),
                      size,
                      exact ? Status::Exact : Status::LowerBound,
                      search.nodes(),
                      search.elapsed(),
                      SearchConfig{"branch-and-bound", budget, options.orbit_reduction, std::nullopt, 0},
                      std::move(cp)};
}

// ---------------------------------------------------------------------------
// Greedy

SearchResult greedy_lower(const FieldSpec& f, std::size_t n, std::uint64_t seed, unsigned restarts) {
  const auto start = Clock::now();
  const PointSpace space(f, n);
  std::mt19937_64 rng(seed);
  const unsigned rounds = std::max(1u, restarts);
  std::vector<std::size_t> order(space.size());
  std::vector<std::size_t> best;
  std::uint64_t nodes = 0;
  for (unsigned r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
    std::vector<std::size_t> chosen;
    for (std::size_t z : order) {
      ++nodes;
      bool ok = true;
      for (std::size_t a = 0; a < chosen.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < chosen.size(); ++b) {
          if (space.conflict(chosen[a], chosen[b], z)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) chosen.push_back(z);
    }
    if (chosen.size() > best.size()) best = chosen;
  }
  PointSet best_set = space.to_point_set(best);
  verify_or_die(best_set);
  const std::size_t size = best_set.size();
  return SearchResult{n,
                      f.q(),
                      std::move(best_set),
                      size,
                      Status::LowerBound,
                      nodes,
                      seconds_since(start),
                      SearchConfig{"greedy", SearchBudget{std::nullopt, std::nullopt, 1, true}, false, seed, rounds},
                      std::nullopt};
}

}  // namespace rightangle::search

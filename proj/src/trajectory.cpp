#include "geocentroid/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <thread>

namespace geocentroid {

namespace {

constexpr std::size_t kBatchLines = 1024;

struct PeriodAgg {
  CentroidAccumulator acc;
  std::uint64_t total = 0;
  std::uint64_t contributing = 0;
  std::uint64_t skipped = 0;

  explicit PeriodAgg(CentroidMode mode) : acc(mode) {}
};

struct WorkerState {
  std::map<PeriodKey, PeriodAgg> periods;
  RunCounters counters;
  std::vector<Diagnostic> diagnostics;
};

struct Batch {
  std::size_t first_line = 0;
  std::vector<std::string> lines;
};

// Bounded handoff between the reader and the workers.
class BatchQueue {
 public:
  explicit BatchQueue(std::size_t capacity) : capacity_(capacity) {}

  void push(Batch&& batch) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return queue_.size() < capacity_ || closed_; });
    if (closed_) return;
    queue_.push_back(std::move(batch));
    lock.unlock();
    not_empty_.notify_one();
  }

  bool pop(Batch& batch) {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return false;
    batch = std::move(queue_.front());
    queue_.pop_front();
    lock.unlock();
    not_full_.notify_one();
    return true;
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<Batch> queue_;
  std::size_t capacity_;
  bool closed_ = false;
};

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

class Pipeline {
 public:
  Pipeline(const OrgRegistry& registry, const TrajectoryConfig& config, bool with_centroids)
      : registry_(registry), config_(config), with_centroids_(with_centroids) {}

  void process_line(std::string_view line, std::size_t line_no, WorkerState& st) const {
    if (is_blank(line)) return;
    ++st.counters.records_read;

    std::string error;
    const auto record = parse_record(line, config_.limits, error);
    if (!record) {
      ++st.counters.parse_errors;
      if (st.diagnostics.size() < config_.max_diagnostics) {
        st.diagnostics.push_back({line_no, std::move(error)});
      } else {
        ++st.counters.diagnostics_suppressed;
      }
      if (config_.strict) abort_.store(true, std::memory_order_relaxed);
      return;
    }

    const auto key = period_key(*record, config_.granularity);
    if (!key) {
      ++st.counters.undated;
      return;
    }
    if ((config_.from && *key < *config_.from) || (config_.to && *config_.to < *key)) {
      ++st.counters.filtered_out;
      return;
    }

    auto it = st.periods.find(*key);
    if (it == st.periods.end()) {
      it = st.periods.emplace(*key, PeriodAgg(config_.mode)).first;
    }
    PeriodAgg& agg = it->second;
    ++agg.total;

    const ResolvedPublication resolved = resolve_affiliations(*record, registry_);
    st.counters.dropped_authors += resolved.dropped_author_count;
    st.counters.dropped_org_refs += resolved.dropped_org_ref_count;

    if (resolved.resolved_authors.empty()) {
      ++agg.skipped;
      ++st.counters.unresolvable;
      agg.acc.note_skipped();
      return;
    }
    ++agg.contributing;
    if (!with_centroids_) return;

    const auto weights = contribution_weights(resolved);
    bool missing_input = false;
    const double pub_weight = publication_weight(resolved, config_.scheme, &missing_input);
    if (missing_input) ++st.counters.missing_weight_input;

    const auto centroid =
        publication_centroid(resolved, weights, config_.mode, pub_weight);
    if (!centroid) {
      ++st.counters.degenerate_spherical;
      agg.acc.note_skipped();
      return;
    }
    if (pub_weight == 0.0) {
      ++st.counters.zero_weight;
    } else {
      ++st.counters.contributing;
    }
    agg.acc.add(*centroid);
  }

  bool aborted() const { return abort_.load(std::memory_order_relaxed); }

  TrajectoryResult run(LineReader& pubs) const {
    std::vector<WorkerState> states;
    if (config_.threads <= 1) {
      states.emplace_back();
      std::string line;
      while (!aborted() && pubs.next(line)) {
        process_line(line, pubs.line_number(), states[0]);
      }
    } else {
      states = run_parallel(pubs);
    }
    return assemble(std::move(states));
  }

 private:
  std::vector<WorkerState> run_parallel(LineReader& pubs) const {
    const unsigned workers = config_.threads;
    std::vector<WorkerState> states(workers);
    BatchQueue queue(workers * 4);

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) {
      pool.emplace_back([&, i] {
        Batch batch;
        while (queue.pop(batch)) {
          for (std::size_t k = 0; k < batch.lines.size(); ++k) {
            if (aborted()) break;
            process_line(batch.lines[k], batch.first_line + k, states[i]);
          }
        }
      });
    }

    std::string line;
    Batch batch;
    batch.lines.reserve(kBatchLines);
    bool more = true;
    while (more && !aborted()) {
      batch.lines.clear();
      batch.first_line = pubs.line_number() + 1;
      while (batch.lines.size() < kBatchLines && (more = pubs.next(line))) {
        batch.lines.push_back(line);
      }
      if (!batch.lines.empty()) queue.push(std::move(batch));
      batch = Batch{};
      batch.lines.reserve(kBatchLines);
    }
    queue.close();
    for (std::thread& t : pool) t.join();
    return states;
  }

  TrajectoryResult assemble(std::vector<WorkerState>&& states) const {
    TrajectoryResult result;
    std::map<PeriodKey, PeriodAgg> merged;
    for (WorkerState& st : states) {
      for (auto& [key, agg] : st.periods) {
        auto it = merged.find(key);
        if (it == merged.end()) {
          merged.emplace(key, std::move(agg));
        } else {
          it->second.acc.merge(agg.acc);
          it->second.total += agg.total;
          it->second.contributing += agg.contributing;
          it->second.skipped += agg.skipped;
        }
      }
      result.counters.records_read += st.counters.records_read;
      result.counters.parse_errors += st.counters.parse_errors;
      result.counters.undated += st.counters.undated;
      result.counters.filtered_out += st.counters.filtered_out;
      result.counters.unresolvable += st.counters.unresolvable;
      result.counters.zero_weight += st.counters.zero_weight;
      result.counters.missing_weight_input += st.counters.missing_weight_input;
      result.counters.degenerate_spherical += st.counters.degenerate_spherical;
      result.counters.contributing += st.counters.contributing;
      result.counters.dropped_authors += st.counters.dropped_authors;
      result.counters.dropped_org_refs += st.counters.dropped_org_refs;
      result.counters.diagnostics_suppressed += st.counters.diagnostics_suppressed;
      result.diagnostics.insert(result.diagnostics.end(),
                                std::make_move_iterator(st.diagnostics.begin()),
                                std::make_move_iterator(st.diagnostics.end()));
    }

    std::sort(result.diagnostics.begin(), result.diagnostics.end(),
              [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    if (result.diagnostics.size() > config_.max_diagnostics) {
      result.counters.diagnostics_suppressed +=
          result.diagnostics.size() - config_.max_diagnostics;
      result.diagnostics.resize(config_.max_diagnostics);
    }

    result.stats.reserve(merged.size());
    for (const auto& [key, agg] : merged) {
      result.stats.push_back({key, agg.total, agg.contributing, agg.skipped});
      if (!with_centroids_) continue;
      if (const auto fin = agg.acc.finalize()) {
        result.points.push_back({key, fin->latitude, fin->longitude, fin->n_pubs,
                                 fin->total_weight, fin->n_pubs >= config_.min_records});
      }
    }
    result.aborted = aborted();
    return result;
  }

  const OrgRegistry& registry_;
  const TrajectoryConfig& config_;
  bool with_centroids_;
  mutable std::atomic<bool> abort_{false};
};

}  // namespace

std::optional<PeriodKey> period_key(const PublicationRecord& record, Granularity granularity) {
  if (granularity == Granularity::year) return PeriodKey{record.year, std::nullopt};
  if (!record.month) return std::nullopt;
  return PeriodKey{record.year, record.month};
}

TrajectoryResult build_trajectory(LineReader& pubs, const OrgRegistry& registry,
                                  const TrajectoryConfig& config) {
  return Pipeline(registry, config, /*with_centroids=*/true).run(pubs);
}

TrajectoryResult period_counts(LineReader& pubs, const OrgRegistry& registry,
                               const TrajectoryConfig& config) {
  return Pipeline(registry, config, /*with_centroids=*/false).run(pubs);
}

}  // namespace geocentroid

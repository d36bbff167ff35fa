#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "geoeig/errors.hpp"
#include "geoeig/geo_matrix.hpp"
#include "geoeig/graph.hpp"

namespace geoeig {

struct Message {
  vertex sender;
  int tag;
  cplx payload;
};

// Per-round metering, one slot per vertex.
struct RoundRecord {
  std::size_t round;
  std::vector<std::size_t> messages_sent;
  std::vector<std::size_t> scalars_sent;
};

struct AccessRecord {
  std::size_t round;
  vertex reader;
  vertex sender;
};

class NetworkSim;

// The only handle a vertex program gets: its own id, its own inbox and a
// send operation that refuses destinations beyond the communication range.
class VertexContext {
 public:
  vertex id() const { return id_; }

  void send(vertex to, int tag, cplx payload);

  // Sends to every vertex of B(id, radius) except id itself.
  void send_to_ball(std::size_t radius, int tag, cplx payload);

  void send_to_neighbors(int tag, cplx payload) { send_to_ball(1, tag, payload); }

  // Messages delivered at the start of this round, ascending by sender.
  std::span<const Message> inbox() const;

 private:
  friend class NetworkSim;
  VertexContext(NetworkSim& sim, vertex id) : sim_(sim), id_(id) {}
  NetworkSim& sim_;
  vertex id_;
};

// Deterministic synchronous message-passing network. A round consists of a
// compute phase (`step`, any number of them) followed by `exchange`, which
// makes every message sent during the round visible in the receivers'
// inboxes for the next round only. Direct links exist between vertices at
// hop distance <= range; there is no relaying.
//
// Vertex programs may run in parallel within a step; each vertex touches only
// its own outbox, and delivery orders messages by sender, so results do not
// depend on the thread count.
class NetworkSim {
 public:
  NetworkSim(graph_ptr g, std::size_t range, unsigned threads = 1)
      : g_(std::move(g)), range_(range), threads_(std::max(1u, threads)) {
    if (!g_) throw invalid_input("network needs a graph");
    const std::size_t n = g_->size();
    reach_.resize(n);
    for (vertex i = 0; i < n; ++i) {
      const auto dist = bfs_distances(*g_, i, range_);
      for (vertex j = 0; j < n; ++j)
        if (dist[j] <= range_) reach_[i].emplace_back(j, dist[j]);
    }
    outbox_.resize(n);
    inbox_.resize(n);
    access_.resize(n);
    sent_now_.assign(n, 0);
  }

  const Graph& graph() const { return *g_; }
  const graph_ptr& graph_handle() const { return g_; }
  std::size_t size() const { return g_->size(); }
  std::size_t range() const { return range_; }
  unsigned threads() const { return threads_; }

  // Hop distance if within range, otherwise `unreachable`.
  std::size_t hops(vertex i, vertex j) const {
    const auto& r = reach_.at(i);
    const auto it = std::lower_bound(r.begin(), r.end(), j,
                                     [](const auto& e, vertex v) { return e.first < v; });
    return (it != r.end() && it->first == j) ? it->second : unreachable;
  }

  // B(i, radius) for radius <= range.
  std::vector<vertex> ball(vertex i, std::size_t radius) const {
    if (radius > range_) throw range_violation("ball radius exceeds communication range");
    std::vector<vertex> out;
    for (const auto& [j, d] : reach_.at(i))
      if (d <= radius) out.push_back(j);
    return out;
  }

  std::size_t ball_size(vertex i, std::size_t radius) const { return ball(i, radius).size(); }

  // Runs `program(VertexContext&)` once for every vertex.
  template <class Program>
  void step(Program&& program) {
    const std::size_t n = size();
    auto run_range = [&](std::size_t lo, std::size_t hi) {
      for (vertex i = lo; i < hi; ++i) {
        VertexContext ctx(*this, i);
        program(ctx);
      }
    };
    if (threads_ == 1 || n < 2 * threads_) {
      run_range(0, n);
      return;
    }
    std::vector<std::exception_ptr> errors(threads_);
    {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (n + threads_ - 1) / threads_;
      for (unsigned t = 0; t < threads_; ++t) {
        const std::size_t lo = std::min(n, t * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, t, lo, hi] {
          try {
            run_range(lo, hi);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Ends the round: the outboxes become next round's inboxes.
  void exchange() {
    const std::size_t n = size();
    for (auto& box : inbox_) box.clear();
    std::size_t total = 0;
    for (vertex s = 0; s < n; ++s) {
      for (const auto& [to, msg] : outbox_[s]) inbox_[to].push_back(msg);
      sent_now_[s] = outbox_[s].size();
      total += outbox_[s].size();
      max_per_vertex_round_ = std::max(max_per_vertex_round_, outbox_[s].size());
      outbox_[s].clear();
    }
    total_messages_ += total;
    if (record_trace_) trace_.push_back({rounds_, sent_now_, sent_now_});
    ++rounds_;
  }

  std::size_t rounds() const { return rounds_; }
  std::size_t total_messages() const { return total_messages_; }
  // Every message carries one complex scalar.
  std::size_t total_scalars() const { return total_messages_; }
  std::size_t max_messages_per_vertex_round() const { return max_per_vertex_round_; }

  void record_trace(bool on) { record_trace_ = on; }
  const std::vector<RoundRecord>& trace() const { return trace_; }

  // Round trace as CSV: round,vertex,messages_sent,scalars_sent.
  void write_trace_csv(std::ostream& os) const {
    os << "round,vertex,messages_sent,scalars_sent\n";
    for (const auto& r : trace_)
      for (vertex i = 0; i < r.messages_sent.size(); ++i)
        os << r.round << ',' << i << ',' << r.messages_sent[i] << ',' << r.scalars_sent[i] << '\n';
  }

  void log_access(bool on) { log_access_ = on; }
  std::vector<AccessRecord> access_log() const {
    std::vector<AccessRecord> out;
    for (const auto& per_vertex : access_) out.insert(out.end(), per_vertex.begin(), per_vertex.end());
    return out;
  }

  void reset_meters() {
    rounds_ = 0;
    total_messages_ = 0;
    max_per_vertex_round_ = 0;
    trace_.clear();
    for (auto& a : access_) a.clear();
  }

 private:
  friend class VertexContext;

  void post(vertex from, vertex to, int tag, cplx payload) {
    if (hops(from, to) == unreachable)
      throw range_violation("vertex " + std::to_string(from) + " cannot reach vertex " + std::to_string(to) +
                            " within range " + std::to_string(range_));
    if (from == to) throw invalid_input("a vertex does not message itself");
    outbox_[from].emplace_back(to, Message{from, tag, payload});
  }

  void post_ball(vertex from, std::size_t radius, int tag, cplx payload) {
    if (radius > range_) throw range_violation("broadcast radius exceeds communication range");
    for (const auto& [j, d] : reach_[from])
      if (d <= radius && j != from) outbox_[from].emplace_back(j, Message{from, tag, payload});
  }

  std::span<const Message> read(vertex reader) {
    if (log_access_)
      for (const auto& m : inbox_[reader]) access_[reader].push_back({rounds_, reader, m.sender});
    return inbox_[reader];
  }

  graph_ptr g_;
  std::size_t range_;
  unsigned threads_;
  std::vector<std::vector<std::pair<vertex, std::size_t>>> reach_;
  std::vector<std::vector<std::pair<vertex, Message>>> outbox_;
  std::vector<std::vector<Message>> inbox_;
  std::vector<std::vector<AccessRecord>> access_;
  std::vector<std::size_t> sent_now_;
  std::vector<RoundRecord> trace_;
  std::size_t rounds_ = 0;
  std::size_t total_messages_ = 0;
  std::size_t max_per_vertex_round_ = 0;
  bool record_trace_ = false;
  bool log_access_ = false;
};

inline void VertexContext::send(vertex to, int tag, cplx payload) { sim_.post(id_, to, tag, payload); }

inline void VertexContext::send_to_ball(std::size_t radius, int tag, cplx payload) {
  sim_.post_ball(id_, radius, tag, payload);
}

inline std::span<const Message> VertexContext::inbox() const { return sim_.read(id_); }

}  // namespace geoeig

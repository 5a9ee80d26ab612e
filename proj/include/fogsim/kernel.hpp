#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogsim {

// Simulated time in milliseconds. Config files accept seconds and convert.
using SimTime = double;

enum class EventKind {
    LocationChanged,
    TupleArrival,
    TupleExecuted,
    TransferComplete,
    ClusteringTrigger,
    MigrationStep,
    LoopProbe,
};

const char* event_kind_name(EventKind k);

struct Event {
    SimTime fire_at = 0.0;
    uint64_t seq = 0;     // global insertion counter, unique per run
    int target = -1;      // entity id, meaning is up to the dispatcher
    EventKind kind = EventKind::LoopProbe;
    int64_t a = 0;        // kind-specific payload slots
    int64_t b = 0;
    double x = 0.0;
};

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Deterministic single-threaded event kernel. Pop order is
// (fire_at ascending, seq ascending), so simultaneous events dispatch in
// insertion order regardless of heap internals.
class Kernel {
public:
    using Handler = std::function<void(const Event&)>;

    SimTime now() const { return now_; }

    void set_dispatcher(Handler h) { dispatcher_ = std::move(h); }

    // Schedules e.fire_at/target/kind/payload; seq is assigned here.
    // Scheduling in the past is a hard error.
    void schedule(Event e);

    // Convenience overload.
    void schedule(SimTime fire_at, int target, EventKind kind,
                  int64_t a = 0, int64_t b = 0, double x = 0.0);

    // Dispatches every event with fire_at <= t_end, in order, and returns the
    // final clock value (t_end).
    SimTime run_until(SimTime t_end);

    size_t pending() const { return queue_.size(); }
    uint64_t dispatched_count() const { return dispatched_; }
    uint64_t scheduled_count() const { return next_seq_; }

    // Dispatch trace of (fire_at, seq), kept only when tracing is enabled.
    void enable_trace(bool on) { trace_enabled_ = on; }
    const std::vector<std::pair<SimTime, uint64_t>>& trace() const { return trace_; }

private:
    struct Later {
        bool operator()(const Event& l, const Event& r) const {
            if (l.fire_at != r.fire_at) return l.fire_at > r.fire_at;
            return l.seq > r.seq;
        }
    };

    SimTime now_ = 0.0;
    uint64_t next_seq_ = 0;
    uint64_t dispatched_ = 0;
    bool trace_enabled_ = false;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    Handler dispatcher_;
    std::vector<std::pair<SimTime, uint64_t>> trace_;
};

} // namespace fogsim

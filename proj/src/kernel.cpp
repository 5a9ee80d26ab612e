#include "fogsim/kernel.hpp"

#include <cmath>

namespace fogsim {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::LocationChanged: return "LocationChanged";
        case EventKind::TupleArrival: return "TupleArrival";
        case EventKind::TupleExecuted: return "TupleExecuted";
        case EventKind::TransferComplete: return "TransferComplete";
        case EventKind::ClusteringTrigger: return "ClusteringTrigger";
        case EventKind::MigrationStep: return "MigrationStep";
        case EventKind::LoopProbe: return "LoopProbe";
    }
    return "?";
}

void Kernel::schedule(Event e) {
    if (!std::isfinite(e.fire_at) || e.fire_at < now_) {
        throw SimulationError(
            std::string("schedule in the past: ") + event_kind_name(e.kind) +
            " at t=" + std::to_string(e.fire_at) + " ms, now=" +
            std::to_string(now_) + " ms");
    }
    e.seq = next_seq_++;
    queue_.push(e);
}

void Kernel::schedule(SimTime fire_at, int target, EventKind kind,
                      int64_t a, int64_t b, double x) {
    Event e;
    e.fire_at = fire_at;
    e.target = target;
    e.kind = kind;
    e.a = a;
    e.b = b;
    e.x = x;
    schedule(e);
}

SimTime Kernel::run_until(SimTime t_end) {
    while (!queue_.empty() && queue_.top().fire_at <= t_end) {
        Event e = queue_.top();
        queue_.pop();
        now_ = e.fire_at;
        if (trace_enabled_) trace_.emplace_back(e.fire_at, e.seq);
        ++dispatched_;
        if (dispatcher_) {
            try {
                dispatcher_(e);
            } catch (const std::exception& ex) {
                throw SimulationError(
                    std::string("dispatch failed for ") + event_kind_name(e.kind) +
                    " seq=" + std::to_string(e.seq) + " at t=" +
                    std::to_string(e.fire_at) + " ms: " + ex.what());
            }
        }
    }
    now_ = t_end;
    return now_;
}

} // namespace fogsim

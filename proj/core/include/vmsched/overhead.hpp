#pragma once

#include <map>
#include <string>

namespace vmsched {

/// Per-class counts of concurrently running jobs. Classes with a zero count
/// are omitted, so the key is canonical.
using ClassMix = std::map<std::string, int>;

enum class OverheadMode { Off, Static, Dynamic };

/// Virtualization slowdown model. Off pins the coefficient to zero, Static
/// ignores the running mix, Dynamic adds a per-mix surcharge on top of the
/// base coefficient.
struct OverheadModel {
    OverheadMode mode = OverheadMode::Off;
    double base_coefficient = 0.0;                 // >= 0
    std::map<ClassMix, double> contention_table;   // mix bucket -> extra, >= 0

    void validate() const;
};

/// Tick length of the simulated node, in hours. Must be positive and finite:
/// an unbounded tick would make slot bookings unmeasurable.
struct SlotClock {
    double tick_h = 0.1;

    void validate() const;
};

/// Overhead coefficient in effect for the given running mix. Total function:
/// unknown mix buckets fall back to the base coefficient.
double effective_overhead(const OverheadModel& model, const ClassMix& running_mix);

/// Wall-clock hours a job of physical duration `duration_h` needs under
/// overhead coefficient `overhead`: duration * (1 + overhead).
double virtual_exec_time(double duration_h, double overhead);

/// Number of whole clock slots the virtual execution time books, rounded up.
int slots_required(double virtual_hours, const SlotClock& clock);

} // namespace vmsched

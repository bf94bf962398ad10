#include "vmsched/overhead.hpp"

#include <cmath>
#include <stdexcept>

#include "vmsched/errors.hpp"

namespace vmsched {

void OverheadModel::validate() const {
    if (base_coefficient < 0.0) {
        throw ConfigError("overhead: base_coefficient must be >= 0");
    }
    for (const auto& [mix, extra] : contention_table) {
        if (extra < 0.0) {
            throw ConfigError("overhead: contention_table entries must be >= 0");
        }
        for (const auto& [name, count] : mix) {
            if (count < 1) {
                throw ConfigError("overhead: contention_table mix counts must be >= 1");
            }
        }
    }
}

void SlotClock::validate() const {
    if (!(tick_h > 0.0) || !std::isfinite(tick_h)) {
        throw ConfigError("clock: tick_hours must be positive and finite");
    }
}

double effective_overhead(const OverheadModel& model, const ClassMix& running_mix) {
    switch (model.mode) {
    case OverheadMode::Off:
        return 0.0;
    case OverheadMode::Static:
        return model.base_coefficient;
    case OverheadMode::Dynamic: {
        ClassMix key;
        for (const auto& [name, count] : running_mix) {
            if (count > 0) {
                key.emplace(name, count);
            }
        }
        auto it = model.contention_table.find(key);
        const double extra = it == model.contention_table.end() ? 0.0 : it->second;
        return model.base_coefficient + extra;
    }
    }
    return 0.0;
}

double virtual_exec_time(double duration_h, double overhead) {
    if (!(duration_h > 0.0)) {
        throw std::invalid_argument("virtual_exec_time: duration must be > 0");
    }
    if (overhead < 0.0) {
        throw std::invalid_argument("virtual_exec_time: overhead must be >= 0");
    }
    return duration_h * (1.0 + overhead);
}

int slots_required(double virtual_hours, const SlotClock& clock) {
    clock.validate();
    if (!(virtual_hours > 0.0)) {
        throw std::invalid_argument("slots_required: virtual_hours must be > 0");
    }
    // The epsilon keeps exact multiples from rounding up an extra slot.
    const double slots = std::ceil(virtual_hours / clock.tick_h - 1e-9);
    return slots < 1.0 ? 1 : static_cast<int>(slots);
}

} // namespace vmsched

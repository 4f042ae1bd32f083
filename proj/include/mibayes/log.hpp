#pragma once

#include <functional>
#include <iostream>
#include <string_view>

namespace mibayes {

using WarningSink = std::function<void(std::string_view)>;

// Process-wide sink for non-fatal numerical events (variance clamp, fit
// fallback). Defaults to stderr; tests and batch tools may replace it.
inline WarningSink& warning_sink() {
    static WarningSink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

inline void warn(std::string_view msg) {
    if (auto& sink = warning_sink()) sink(msg);
}

/// RAII guard that swaps the warning sink for the lifetime of the object.
class ScopedWarningSink {
public:
    explicit ScopedWarningSink(WarningSink sink) : saved_(std::move(warning_sink())) {
        warning_sink() = std::move(sink);
    }
    ~ScopedWarningSink() { warning_sink() = std::move(saved_); }
    ScopedWarningSink(const ScopedWarningSink&) = delete;
    ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

private:
    WarningSink saved_;
};

}  // namespace mibayes

#pragma once

#include <chrono>
#include <cstdio>
#include <string>

namespace ballpark {

// h:mm:ss.ffffff with microsecond fraction, e.g. "0:00:08.249678".
inline std::string format_duration(std::chrono::microseconds d) {
    long long us = d.count();
    const bool negative = us < 0;
    if (negative) us = -us;
    const long long h = us / 3'600'000'000LL;
    const long long m = us / 60'000'000LL % 60;
    const long long s = us / 1'000'000LL % 60;
    const long long frac = us % 1'000'000LL;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%lld:%02lld:%02lld.%06lld", negative ? "-" : "", h, m, s,
                  frac);
    return buf;
}

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    std::chrono::microseconds elapsed() const {
        return std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - start_);
    }
    void restart() { start_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace ballpark

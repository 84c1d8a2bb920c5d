#pragma once

#include <stdexcept>
#include <string>

namespace flowlab {

// Thrown when a slow-flow quantity is requested along an orbit that contains
// the degenerate point exactly; the slow orbit of that point is the point itself.
class PointFixedUnderSlowFlow : public std::runtime_error {
public:
    explicit PointFixedUnderSlowFlow(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when inverting slow time would require searching past the configured
// fast-time window cap.
class HorizonExceeded : public std::runtime_error {
public:
    explicit HorizonExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when rank estimation is handed sample points on which all profiles
// are identically 1.
class DegenerateSamples : public std::invalid_argument {
public:
    explicit DegenerateSamples(const std::string& what)
        : std::invalid_argument(what) {}
};

}  // namespace flowlab

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "pairgen/vec3.hpp"

namespace pairgen {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration. `field()` names the offending key.
class ConfigError : public Error {
  public:
    ConfigError(std::string field, const std::string &what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Time outside the tabulated vector-potential window.
class WindowRangeError : public Error {
  public:
    WindowRangeError(double t, double t_start, double t_end)
        : Error("time " + std::to_string(t) + " outside window [" + std::to_string(t_start) + ", " +
                std::to_string(t_end) + "]"),
          t_(t) {}
    double time() const noexcept { return t_; }

  private:
    double t_;
};

/// Filesystem failure; the message carries the path.
class IoError : public Error {
  public:
    IoError(const std::string &path, const std::string &what) : Error(path + ": " + what), path_(path) {}
    const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

/// Integration of a single momentum mode failed.
class NumericalFailure : public Error {
  public:
    NumericalFailure(const std::string &what, Vec3 q, double t_reached)
        : Error(what + " at q=(" + std::to_string(q.x) + ", " + std::to_string(q.y) + ", " +
                std::to_string(q.z) + "), t=" + std::to_string(t_reached)),
          q_(q), t_reached_(t_reached) {}
    Vec3 momentum() const noexcept { return q_; }
    double time_reached() const noexcept { return t_reached_; }

  private:
    Vec3 q_;
    double t_reached_;
};

/// The step budget ran out before the end of the window.
class StepBudgetExhausted : public NumericalFailure {
  public:
    StepBudgetExhausted(Vec3 q, double t_reached)
        : NumericalFailure("step budget exhausted", q, t_reached) {}
};

/// A solver was asked to handle a field it does not support.
class UnsupportedConfiguration : public Error {
  public:
    using Error::Error;
};

/// Photon order below the multiphoton threshold.
class NoRealSolution : public Error {
  public:
    NoRealSolution(int order, int threshold_order)
        : Error("photon order " + std::to_string(order) + " is below threshold order " +
                std::to_string(threshold_order)),
          order_(order), threshold_order_(threshold_order) {}
    int order() const noexcept { return order_; }
    int threshold_order() const noexcept { return threshold_order_; }

  private:
    int order_;
    int threshold_order_;
};

/// Feature extraction on a spectrum that is identically zero.
class EmptySpectrum : public Error {
  public:
    using Error::Error;
};

/// One or more modes of a sweep failed beyond the failure budget.
class SweepFailure : public Error {
  public:
    SweepFailure(const std::string &what, std::size_t ix, std::size_t iy)
        : Error(what + " [grid node " + std::to_string(ix) + ", " + std::to_string(iy) + "]"),
          ix_(ix), iy_(iy) {}
    std::size_t ix() const noexcept { return ix_; }
    std::size_t iy() const noexcept { return iy_; }

  private:
    std::size_t ix_;
    std::size_t iy_;
};

} // namespace pairgen

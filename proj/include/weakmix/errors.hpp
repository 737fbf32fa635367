// errors.hpp — typed error conditions shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace weakmix {

enum class Errc {
    cap_exceeded,
    unknown_symbol,
    seed_not_extendable,
    not_a_factor,
    ambiguous_context,
    dimension_mismatch,
    word_too_short,
    depth_too_shallow,
    stage_cap_exceeded,
    undefined_point,
    empty_cell,
    no_return_words,
    bump_condition_failed,
    cesaro_bound_violated,
    config_invalid,
    numeric_overflow,
};

// Single exception type carrying a machine-checkable code plus a message.
class Error : public std::runtime_error {
  public:
    Error(Errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc c, const std::string& what) { throw Error(c, what); }

} // namespace weakmix

#pragma once
#include <stdexcept>
#include <string>

namespace ffv {

enum class errc {
    bad_argument,
    io_error,
    malformed_config,
    malformed_vault,
    malformed_image,
    malformed_pointset,
    duplicate_abscissa,
    duplicate_point,
    finger_below_chi,
    not_enough_reliable,
    placement_failure,
    empty_foreground,
    infeasible,
    no_feasible_params,
    internal,
};

/// Error carrying a machine-readable code; `finger` is set for per-finger
/// enrollment failures so callers can re-capture just that finger.
class error : public std::runtime_error {
public:
    error(errc c, std::string msg, int finger = -1)
        : std::runtime_error(std::move(msg)), code(c), finger(finger) {}
    errc code;
    int finger;
};

[[noreturn]] inline void fail(errc c, std::string msg, int finger = -1) {
    throw error(c, std::move(msg), finger);
}

} // namespace ffv

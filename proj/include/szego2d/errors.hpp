#pragma once

#include <stdexcept>
#include <string>

namespace szego2d {

enum class errc {
  degenerate_triangle,
  hypothesis_t_violated,
  empty_interior,
  not_convex,
  cone_not_in_vertex_cone,
  aliased_grid,
  non_positive_symbol,
  non_real_mean,
  not_unimodular,
  cone_too_narrow_for_exact_path,
  not_positive_definite,
  dimension_mismatch,
  box_too_small,
  singular_path_unsupported,
  solver_diverged,
  too_large,
  point_outside_triangle,
  non_negligible_imaginary_part,
  symbol_not_contraction,
  insufficient_data,
  io_error,
  invalid_config,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace szego2d

#pragma once

#include <cstddef>
#include <cstdint>

#include "fringe/kernels.hpp"

namespace fringe::kernels::detail {

struct OpsTable {
  void (*add)(const double*, const double*, double*, std::size_t);
  void (*sub)(const double*, const double*, double*, std::size_t);
  void (*scale_offset)(const double*, double, double, double*, std::size_t);
  void (*lerp)(const double*, const double*, const double*, double*, std::size_t);
  void (*magnitude)(const double*, const double*, double*, std::size_t);
  void (*cosine_from_complex)(const double*, const double*, double*, std::size_t);
  void (*wta_update)(const double*, const double*, const double*, std::int32_t, double*, double*,
                     double*, std::int32_t*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*dot2)(const double*, const double*, const double*, std::size_t, double&, double&);
  void (*minmax)(const double*, std::size_t, double&, double&);
  EllipseMoments (*ellipse_moments)(const double*, const double*, std::size_t);
  EllipseMoments (*ellipse_moments_weighted)(const double*, const double*, const double*,
                                             std::size_t);
};

const OpsTable& scalar_table();
#if defined(FRINGE_HAVE_AVX2)
const OpsTable& avx2_table();
#endif

}  // namespace fringe::kernels::detail

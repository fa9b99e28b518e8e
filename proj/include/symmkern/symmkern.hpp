#pragma once

#include "symmkern/error.hpp"
#include "symmkern/geometry.hpp"
#include "symmkern/io.hpp"
#include "symmkern/quadrature.hpp"
#include "symmkern/quaternion.hpp"
#include "symmkern/rkhs.hpp"
#include "symmkern/special_functions.hpp"
#include "symmkern/spectral_kernels.hpp"

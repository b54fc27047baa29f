#pragma once

#include "quadla/block_matrix.hpp"
#include "quadla/complexity.hpp"
#include "quadla/dense_matrix.hpp"
#include "quadla/errors.hpp"
#include "quadla/generate.hpp"
#include "quadla/inversion.hpp"
#include "quadla/lu.hpp"
#include "quadla/matrix_io.hpp"
#include "quadla/op_counter.hpp"
#include "quadla/random.hpp"
#include "quadla/rings.hpp"

#ifndef BERGMAN_BERGMAN_HPP
#define BERGMAN_BERGMAN_HPP

#include "bergman/bipoly.hpp"
#include "bergman/divisibility.hpp"
#include "bergman/expansion.hpp"
#include "bergman/model_kernel.hpp"
#include "bergman/monge_ampere.hpp"
#include "bergman/parse.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/rational.hpp"
#include "bergman/rational_fn.hpp"
#include "bergman/special_functions.hpp"
#include "bergman/transforms.hpp"
#include "bergman/weight.hpp"

#endif

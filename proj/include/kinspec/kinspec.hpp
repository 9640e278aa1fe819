#pragma once

#include "kinspec/analysis.hpp"
#include "kinspec/eigenbasis.hpp"
#include "kinspec/errors.hpp"
#include "kinspec/hermite_algebra.hpp"
#include "kinspec/io.hpp"
#include "kinspec/parallel.hpp"
#include "kinspec/quadrature.hpp"
#include "kinspec/semigroup.hpp"
#include "kinspec/specfun.hpp"
#include "kinspec/spectra.hpp"
#include "kinspec/summation.hpp"

#pragma once

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/shapes.hpp"
#include "christoffel/mvee.hpp"
#include "christoffel/normalize.hpp"
#include "christoffel/chart.hpp"
#include "christoffel/parabola.hpp"
#include "christoffel/bounds.hpp"
#include "christoffel/quadrature.hpp"
#include "christoffel/orthopoly.hpp"
#include "christoffel/christoffel.hpp"
#include "christoffel/nnls.hpp"
#include "christoffel/tchakaloff.hpp"
#include "christoffel/mesh.hpp"

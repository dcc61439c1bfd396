#pragma once

#include "cohodyn/builtins.hpp"
#include "cohodyn/class_expr.hpp"
#include "cohodyn/cohomology.hpp"
#include "cohodyn/cone.hpp"
#include "cohodyn/dynamics.hpp"
#include "cohodyn/error.hpp"
#include "cohodyn/green.hpp"
#include "cohodyn/lelong.hpp"
#include "cohodyn/linear.hpp"
#include "cohodyn/map_model.hpp"
#include "cohodyn/matrix.hpp"
#include "cohodyn/monomial.hpp"
#include "cohodyn/polynomial.hpp"
#include "cohodyn/rational.hpp"
#include "cohodyn/roots.hpp"
#include "cohodyn/serialize.hpp"
#include "cohodyn/siu.hpp"
#include "cohodyn/workspace.hpp"

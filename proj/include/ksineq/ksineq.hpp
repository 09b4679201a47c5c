#pragma once

#include <ksineq/rational.hpp>
#include <ksineq/linalg.hpp>
#include <ksineq/graph.hpp>
#include <ksineq/ray_set.hpp>
#include <ksineq/quad_form.hpp>
#include <ksineq/inequalities.hpp>
#include <ksineq/bounds.hpp>
#include <ksineq/ks_assign.hpp>
#include <ksineq/realize.hpp>
#include <ksineq/serialize.hpp>
#include <ksineq/report.hpp>

#pragma once

#include "chi2/analysis.hpp"
#include "chi2/closed_form.hpp"
#include "chi2/commands.hpp"
#include "chi2/errors.hpp"
#include "chi2/fixedpoint.hpp"
#include "chi2/io.hpp"
#include "chi2/model.hpp"
#include "chi2/quadrature.hpp"

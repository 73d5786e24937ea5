#pragma once

#include "vitality/cohort.hpp"
#include "vitality/error.hpp"
#include "vitality/filters.hpp"
#include "vitality/indicators.hpp"
#include "vitality/io.hpp"
#include "vitality/model.hpp"

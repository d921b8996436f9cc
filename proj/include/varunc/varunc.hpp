#pragma once

#include "varunc/error.hpp"
#include "varunc/feedback.hpp"
#include "varunc/general_state.hpp"
#include "varunc/qubit.hpp"
#include "varunc/random.hpp"
#include "varunc/relations.hpp"
#include "varunc/tightness.hpp"

#pragma once

#include "cdrop/bits.hpp"
#include "cdrop/codecs.hpp"
#include "cdrop/cost_model.hpp"
#include "cdrop/errors.hpp"
#include "cdrop/event_model.hpp"
#include "cdrop/machines.hpp"
#include "cdrop/oracle.hpp"
#include "cdrop/scenario_io.hpp"
#include "cdrop/sweep.hpp"
#include "cdrop/unexpectedness.hpp"

#pragma once

#include "bigint.hpp"
#include "bitvector.hpp"
#include "cache.hpp"
#include "certificate_json.hpp"
#include "error.hpp"
#include "expsum.hpp"
#include "format.hpp"
#include "localdata.hpp"
#include "modarith.hpp"
#include "parallel.hpp"
#include "polyring.hpp"
#include "roots.hpp"
#include "sieve.hpp"

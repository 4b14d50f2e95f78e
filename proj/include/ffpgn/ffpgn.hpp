#pragma once

// Umbrella header. io.hpp needs nlohmann/json (json.hpp) on the include path.

#include "ffpgn/adelic.hpp"
#include "ffpgn/construct.hpp"
#include "ffpgn/errors.hpp"
#include "ffpgn/exterior.hpp"
#include "ffpgn/field.hpp"
#include "ffpgn/io.hpp"
#include "ffpgn/laurent.hpp"
#include "ffpgn/linalg.hpp"
#include "ffpgn/minima.hpp"
#include "ffpgn/nsystem.hpp"
#include "ffpgn/pade.hpp"
#include "ffpgn/poly.hpp"
#include "ffpgn/reduction.hpp"

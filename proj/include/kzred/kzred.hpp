#pragma once

#include "kzred/bounds.hpp"
#include "kzred/errors.hpp"
#include "kzred/expand.hpp"
#include "kzred/harness.hpp"
#include "kzred/io.hpp"
#include "kzred/kz.hpp"
#include "kzred/linalg.hpp"
#include "kzred/lll.hpp"
#include "kzred/matrix.hpp"
#include "kzred/svp.hpp"
#include "kzred/verify.hpp"

#pragma once

// Umbrella header.

#include "subshift/error.hpp"
#include "subshift/word.hpp"
#include "subshift/spec.hpp"
#include "subshift/oracle.hpp"
#include "subshift/complexity.hpp"
#include "subshift/block_code.hpp"
#include "subshift/enumerate.hpp"
#include "subshift/cylinder.hpp"
#include "subshift/coset.hpp"
#include "subshift/growth.hpp"
#include "subshift/folner.hpp"

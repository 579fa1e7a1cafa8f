#pragma once

#include "qstar/linalg.hpp"
#include "qstar/stargraph.hpp"
#include "qstar/roots.hpp"
#include "qstar/cryptoherm.hpp"
#include "qstar/fdstar.hpp"

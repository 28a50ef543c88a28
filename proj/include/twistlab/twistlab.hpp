#pragma once

#include "twistlab/contfrac.hpp"
#include "twistlab/dimgroup.hpp"
#include "twistlab/elliptic.hpp"
#include "twistlab/error.hpp"
#include "twistlab/integer.hpp"
#include "twistlab/surd.hpp"
#include "twistlab/torus.hpp"

#pragma once

#include "promc/error.hpp"
#include "promc/gf2.hpp"
#include "promc/model.hpp"
#include "promc/set_bij.hpp"
#include "promc/chain_f2.hpp"
#include "promc/index.hpp"
#include "promc/pro.hpp"
#include "promc/strict.hpp"
#include "promc/cocell.hpp"
#include "promc/serialize.hpp"
#include "promc/certificate.hpp"
#include "promc/generate.hpp"
#include "promc/axioms.hpp"

#pragma once

// Umbrella header for the renewal library (everything except the HTTP binding).

#include "renew/artifacts.hpp"
#include "renew/conductors.hpp"
#include "renew/diff.hpp"
#include "renew/error.hpp"
#include "renew/export.hpp"
#include "renew/fabplan.hpp"
#include "renew/geometry.hpp"
#include "renew/ingest_json.hpp"
#include "renew/ingest_sexpr.hpp"
#include "renew/model.hpp"
#include "renew/params.hpp"
#include "renew/sustain.hpp"

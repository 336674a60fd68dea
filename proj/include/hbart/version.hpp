#pragma once

#define HBART_VERSION "0.1.0"

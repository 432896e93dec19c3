/* The public header compiles as C99 and the library links from C. */
#include <frachc/frachc.h>

#include <stdio.h>

int main(void) {
  frachc_config* config = NULL;
  frachc_run* run = NULL;
  double err_inf = 0.0, err_2 = 0.0;
  int rc = 1;

  if (frachc_config_create(FRACHC_EXAMPLE1, &config) != FRACHC_OK) return 1;
  frachc_config_set_int(config, FRACHC_CELLS, 16);
  frachc_config_set_int(config, FRACHC_STEPS, 4);
  if (frachc_simulate(config, NULL, NULL, &run) == FRACHC_OK &&
      frachc_run_errors(run, &err_inf, &err_2) == FRACHC_OK && err_inf > 0.0 &&
      frachc_run_levels(run) == 5) {
    rc = 0;
  } else {
    fprintf(stderr, "%s\n", frachc_last_error());
  }
  frachc_run_destroy(run);
  frachc_config_destroy(config);
  return rc;
}

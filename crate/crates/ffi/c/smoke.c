#include <math.h>
#include <stdio.h>
#include <string.h>

#include "aiecon.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      const char *msg = aiecon_last_error_message();                 \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
              msg ? msg : "no error");                               \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(void) {
  const char *csv =
      "country,indicator,year,value\n"
      "A,innovation_index,2022,2\n"
      "A,rnd_expenditure_pct_gdp,2022,2\n"
      "A,it_exports_pct_goods,2022,2\n"
      "A,high_tech_exports_musd,2022,2\n"
      "A,high_tech_exports_pct_manufactured,2022,2\n"
      "A,patent_applications_residents,2022,2\n";
  AiePanel *panel = NULL;
  CHECK(aiecon_panel_parse(csv, false, &panel) == AIE_STATUS_OK);
  CHECK(aiecon_panel_len(panel) == 6);

  double level = 0.0;
  CHECK(aiecon_technology_level(panel, "A", 2011, 2022, AIE_ZERO_POLICY_REJECT,
                                0.0, &level) == AIE_STATUS_OK);
  CHECK(fabs(level - 2.0) < 1e-12);
  CHECK(aiecon_technology_level(panel, "B", 2011, 2022, AIE_ZERO_POLICY_REJECT,
                                0.0, &level) == AIE_STATUS_MISSING_INDICATOR);
  CHECK(strstr(aiecon_last_error_message(), "B") != NULL);
  aiecon_panel_free(panel);

  double x[] = {1, 2, 3, 4, 5};
  double y[] = {2.1, 3.9, 6.2, 7.8, 10.1};
  AieRegression reg;
  CHECK(aiecon_regress_loglog(x, y, 5, &reg) == AIE_STATUS_OK);
  CHECK(reg.df == 3 && !reg.perfect_fit);
  CHECK(reg.p_value > 0.0 && reg.p_value < 0.01);

  AieAudit audit;
  CHECK(aiecon_audit(12, 0.773, 0.0435, 0.25, &audit) == AIE_STATUS_OK);
  CHECK(audit.verdict == AIE_AUDIT_VERDICT_INCONSISTENT);

  AieReport *report = NULL;
  CHECK(aiecon_reproduce(&report) == AIE_STATUS_OK);
  CHECK(aiecon_report_passed(report));
  char *json = aiecon_report_json(report);
  CHECK(json != NULL);
  aiecon_string_free(json);
  aiecon_report_free(report);

  printf("ok %s\n", aiecon_version());
  return 0;
}

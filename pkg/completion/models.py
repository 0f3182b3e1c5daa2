from django.db import models


class ValidationRunQuerySet(models.QuerySet):
    def passed(self):
        """Runs where both moments agreed with the simulation"""
        return self.filter(passed=True)

    def failed(self):
        """Runs with at least one |z| above the threshold"""
        return self.filter(passed=False)

    def for_scenario(self, name):
        return self.filter(scenario_name=name)


class ValidationRunManager(models.Manager.from_queryset(ValidationRunQuerySet)):
    def record(self, scenario_file, estimate, outcome, workers=1):
        """Store one `validate --record` run."""
        mean = outcome.row("E[R]")
        square = outcome.row("E[R^2]")
        return self.create(
            scenario_name=scenario_file.name,
            scenario_digest=scenario_file.digest,
            n=estimate.n,
            seed=estimate.seed,
            workers=workers,
            analytic_e_r=mean.analytic,
            simulated_e_r=mean.simulated,
            se_e_r=mean.standard_error,
            z_e_r=mean.z,
            analytic_e_r2=square.analytic,
            simulated_e_r2=square.simulated,
            se_e_r2=square.standard_error,
            z_e_r2=square.z,
            z_threshold=outcome.threshold,
            passed=outcome.passed,
        )


class ValidationRun(models.Model):
    """One analytic-vs-simulation comparison"""

    scenario_name = models.CharField(max_length=200, verbose_name="Scenario")
    scenario_digest = models.CharField(max_length=64, verbose_name="SHA-256 of the scenario file")

    # Simulation settings
    n = models.PositiveIntegerField(verbose_name="Paths")
    seed = models.PositiveBigIntegerField()
    workers = models.PositiveSmallIntegerField(default=1)

    # E[R]
    analytic_e_r = models.FloatField()
    simulated_e_r = models.FloatField()
    se_e_r = models.FloatField()
    z_e_r = models.FloatField()

    # E[R^2]
    analytic_e_r2 = models.FloatField()
    simulated_e_r2 = models.FloatField()
    se_e_r2 = models.FloatField()
    z_e_r2 = models.FloatField()

    z_threshold = models.FloatField(default=5.0)
    passed = models.BooleanField()
    created_at = models.DateTimeField(auto_now_add=True)

    objects = ValidationRunManager()

    class Meta:
        verbose_name = "Validation Run"
        verbose_name_plural = "Validation Runs"
        ordering = ["-created_at"]
        indexes = [
            models.Index(fields=["scenario_name", "passed"], name="run_scenario_passed_idx"),
        ]

    def __str__(self):
        verdict = "pass" if self.passed else "FAIL"
        return f"{self.scenario_name} n={self.n} seed={self.seed} {verdict}"

    @property
    def worst_z(self):
        return max(abs(self.z_e_r), abs(self.z_e_r2))

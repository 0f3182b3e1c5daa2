# Generated by Django 5.2.8

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="ValidationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "scenario_name",
                    models.CharField(max_length=200, verbose_name="Scenario"),
                ),
                (
                    "scenario_digest",
                    models.CharField(
                        max_length=64, verbose_name="SHA-256 of the scenario file"
                    ),
                ),
                ("n", models.PositiveIntegerField(verbose_name="Paths")),
                ("seed", models.PositiveBigIntegerField()),
                ("workers", models.PositiveSmallIntegerField(default=1)),
                ("analytic_e_r", models.FloatField()),
                ("simulated_e_r", models.FloatField()),
                ("se_e_r", models.FloatField()),
                ("z_e_r", models.FloatField()),
                ("analytic_e_r2", models.FloatField()),
                ("simulated_e_r2", models.FloatField()),
                ("se_e_r2", models.FloatField()),
                ("z_e_r2", models.FloatField()),
                ("z_threshold", models.FloatField(default=5.0)),
                ("passed", models.BooleanField()),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "verbose_name": "Validation Run",
                "verbose_name_plural": "Validation Runs",
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(
                        fields=["scenario_name", "passed"],
                        name="run_scenario_passed_idx",
                    )
                ],
            },
        ),
    ]

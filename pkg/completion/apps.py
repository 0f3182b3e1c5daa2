from django.apps import AppConfig


class CompletionConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "completion"
    verbose_name = "Completion-time moments"

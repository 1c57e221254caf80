from django.apps import AppConfig


class SzxConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'szx'
    verbose_name = 'Scalable ZX verification'

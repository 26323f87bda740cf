from django.apps import AppConfig


class GrammarConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'grammar'

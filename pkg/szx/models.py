from django.db import models


class VerificationRun(models.Model):
    COMMAND_CHOICES = [
        ('verify', 'Verify'),
        ('suite', 'Suite'),
        ('check_proof', 'Check proof'),
    ]

    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    target = models.CharField(max_length=200)
    seed = models.IntegerField(default=0)
    passed = models.BooleanField(default=False)
    report = models.JSONField(default=dict)
    duration = models.FloatField(default=0.0)

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['-created_at']),
            models.Index(fields=['command']),
        ]

    def __str__(self):
        return f"{self.command} {self.target} ({'pass' if self.passed else 'fail'})"

    def to_dict(self):
        return {
            'id': self.id,
            'command': self.command,
            'target': self.target,
            'seed': self.seed,
            'passed': self.passed,
            'duration': self.duration,
            'created_at': self.created_at.isoformat(),
            'report': self.report,
        }
